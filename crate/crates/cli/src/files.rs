//! JSON tensor files.
//!
//! The on-disk format is deliberately plain so a file can be eyeballed
//! against printed matrices: a `kind` tag, the shape, and nested lists of
//! `[re, im]` pairs indexed slice-first (`data[k][j][i]` is row `i`, column
//! `j` of frontal slice `k`). Finite doubles survive a save/load round trip
//! bit for bit; NaN and infinity are rejected on both paths.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use mprod::{C64, CMatrix, DenseTensor3, FreeSide, SolutionFamily, TransformSpec};

/// Everything that can go wrong between a path and a usable tensor.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON at line {line}, column {column} (byte {offset})")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        offset: usize,
    },
    #[error("{path}: {detail}")]
    Schema { path: PathBuf, detail: String },
    #[error("{path}: non-finite entry at data[{k}][{j}][{i}]")]
    NonFinite {
        path: PathBuf,
        k: usize,
        j: usize,
        i: usize,
    },
    #[error(transparent)]
    Numeric(#[from] mprod::Error),
}

pub type FileResult<T> = Result<T, FileError>;

/// What a file claims to hold: a general tensor or a mixing matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Tensor,
    Transform,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Tensor => "tensor",
            FileKind::Transform => "transform",
        })
    }
}

/// The serialized form. `data[k][j][i] = [re, im]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TensorFile {
    pub kind: FileKind,
    pub shape: [usize; 3],
    pub data: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TensorFile {
    pub fn from_tensor(a: &DenseTensor3, kind: FileKind) -> Self {
        let (n1, n2, n3) = a.shape();
        let data = (0..n3)
            .map(|k| {
                (0..n2)
                    .map(|j| {
                        (0..n1)
                            .map(|i| {
                                let z = a.at(i, j, k);
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        TensorFile {
            kind,
            shape: [n1, n2, n3],
            data,
        }
    }

    /// Validates shape consistency and finiteness, then builds the tensor.
    pub fn into_tensor(self, path: &Path) -> FileResult<DenseTensor3> {
        let [n1, n2, n3] = self.shape;
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(FileError::Schema {
                path: path.to_owned(),
                detail: format!("shape [{n1}, {n2}, {n3}] has a zero dimension"),
            });
        }
        if self.data.len() != n3 {
            return Err(FileError::Schema {
                path: path.to_owned(),
                detail: format!("expected {n3} slices, found {}", self.data.len()),
            });
        }
        for (k, slice) in self.data.iter().enumerate() {
            if slice.len() != n2 {
                return Err(FileError::Schema {
                    path: path.to_owned(),
                    detail: format!("slice {k}: expected {n2} columns, found {}", slice.len()),
                });
            }
            for (j, col) in slice.iter().enumerate() {
                if col.len() != n1 {
                    return Err(FileError::Schema {
                        path: path.to_owned(),
                        detail: format!(
                            "slice {k}, column {j}: expected {n1} rows, found {}",
                            col.len()
                        ),
                    });
                }
                for (i, pair) in col.iter().enumerate() {
                    if !pair[0].is_finite() || !pair[1].is_finite() {
                        return Err(FileError::NonFinite {
                            path: path.to_owned(),
                            k,
                            j,
                            i,
                        });
                    }
                }
            }
        }
        Ok(DenseTensor3::from_fn(n1, n2, n3, |i, j, k| {
            let [re, im] = self.data[k][j][i];
            C64::new(re, im)
        }))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> FileResult<T> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        FileError::Parse {
            path: path.to_owned(),
            line,
            column,
            offset: byte_offset(&text, line, column),
        }
    })
}

/// Byte offset of a 1-based (line, column) position in `text`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    line_start + column.saturating_sub(1)
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> FileResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("in-memory serialization");
    text.push('\n');
    fs::write(path, text).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_tensor(path: &Path) -> FileResult<DenseTensor3> {
    let file: TensorFile = read_json(path)?;
    if file.kind != FileKind::Tensor {
        return Err(FileError::Schema {
            path: path.to_owned(),
            detail: format!("expected kind \"tensor\", found \"{}\"", file.kind),
        });
    }
    file.into_tensor(path)
}

pub fn save_tensor(a: &DenseTensor3, path: &Path) -> FileResult<()> {
    require_finite(a, path)?;
    write_json(&TensorFile::from_tensor(a, FileKind::Tensor), path)
}

/// Loads a mixing matrix stored as a `transform`-kind file of shape [n, n, 1]
/// and validates its invertibility.
pub fn load_transform(path: &Path) -> FileResult<TransformSpec> {
    let file: TensorFile = read_json(path)?;
    if file.kind != FileKind::Transform {
        return Err(FileError::Schema {
            path: path.to_owned(),
            detail: format!("expected kind \"transform\", found \"{}\"", file.kind),
        });
    }
    let [n1, n2, n3] = file.shape;
    if n1 != n2 || n3 != 1 {
        return Err(FileError::Schema {
            path: path.to_owned(),
            detail: format!("transform must have shape [n, n, 1], found [{n1}, {n2}, {n3}]"),
        });
    }
    let tensor = file.into_tensor(path)?;
    let m = CMatrix::from_fn(n1, n1, |i, j| tensor.at(i, j, 0));
    Ok(TransformSpec::new(m)?)
}

pub fn save_transform(t: &TransformSpec, path: &Path) -> FileResult<()> {
    let n = t.n3();
    let tensor = DenseTensor3::from_fn(n, n, 1, |i, j, _| t.m()[(i, j)]);
    write_json(&TensorFile::from_tensor(&tensor, FileKind::Transform), path)
}

fn require_finite(a: &DenseTensor3, path: &Path) -> FileResult<()> {
    let (n1, n2, n3) = a.shape();
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                let z = a.at(i, j, k);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(FileError::NonFinite {
                        path: path.to_owned(),
                        k,
                        j,
                        i,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Serialized solution family: side tag plus the two member tensors.
#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub side: String,
    pub particular: TensorFile,
    pub projector: TensorFile,
}

pub fn save_family(family: &SolutionFamily, path: &Path) -> FileResult<()> {
    let file = FamilyFile {
        side: match family.side {
            FreeSide::LeftFree => "left-free".to_owned(),
            FreeSide::RightFree => "right-free".to_owned(),
        },
        particular: TensorFile::from_tensor(&family.particular, FileKind::Tensor),
        projector: TensorFile::from_tensor(&family.projector, FileKind::Tensor),
    };
    write_json(&file, path)
}

pub fn load_family(path: &Path) -> FileResult<SolutionFamily> {
    let file: FamilyFile = read_json(path)?;
    let side = match file.side.as_str() {
        "left-free" => FreeSide::LeftFree,
        "right-free" => FreeSide::RightFree,
        other => {
            return Err(FileError::Schema {
                path: path.to_owned(),
                detail: format!("unknown side \"{other}\" (expected left-free or right-free)"),
            })
        }
    };
    Ok(SolutionFamily {
        particular: file.particular.into_tensor(path)?,
        projector: file.projector.into_tensor(path)?,
        side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mprod::random::{random_tensor, random_transform};
    use mprod::max_abs_diff;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join("mprod-files-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn tensor_round_trip_is_bitwise() {
        let a = random_tensor(3, 2, 4, 99);
        let path = tmp("roundtrip.json");
        save_tensor(&a, &path).unwrap();
        let b = load_tensor(&path).unwrap();
        assert_eq!(a.shape(), b.shape());
        assert_eq!(max_abs_diff(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn transform_round_trip_preserves_the_matrix() {
        let t = random_transform(3, 100);
        let path = tmp("transform.json");
        save_transform(&t, &path).unwrap();
        let back = load_transform(&path).unwrap();
        assert_eq!((back.m() - t.m()).norm(), 0.0);
    }

    #[test]
    fn wrong_data_length_is_a_schema_error() {
        let path = tmp("badshape.json");
        fs::write(
            &path,
            r#"{"kind":"tensor","shape":[2,2,2],"data":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
        )
        .unwrap();
        assert!(matches!(
            load_tensor(&path),
            Err(FileError::Schema { .. })
        ));
    }

    #[test]
    fn malformed_json_reports_position() {
        let path = tmp("malformed.json");
        fs::write(&path, "{\"kind\": \"tensor\",\n  \"shape\": [1,1,1\n").unwrap();
        match load_tensor(&path) {
            Err(FileError::Parse { line, offset, .. }) => {
                assert!(line >= 2);
                assert!(offset > 0);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn overflowing_numbers_are_rejected_on_load() {
        // JSON has no literal infinity; the only spelling is an overflowing
        // number, which the parser itself refuses.
        let path = tmp("nonfinite.json");
        fs::write(
            &path,
            r#"{"kind":"tensor","shape":[1,1,1],"data":[[[[1e999,0]]]]}"#,
        )
        .unwrap();
        assert!(load_tensor(&path).is_err());
    }

    #[test]
    fn non_finite_tensors_are_rejected_on_save() {
        let a = DenseTensor3::from_fn(1, 1, 1, |_, _, _| C64::new(f64::NAN, 0.0));
        let path = tmp("nansave.json");
        assert!(matches!(
            save_tensor(&a, &path),
            Err(FileError::NonFinite { .. })
        ));
    }

    #[test]
    fn kind_mismatch_is_rejected_both_ways() {
        let a = random_tensor(2, 2, 1, 101);
        let path = tmp("kind.json");
        save_tensor(&a, &path).unwrap();
        assert!(matches!(
            load_transform(&path),
            Err(FileError::Schema { .. })
        ));
    }

    #[test]
    fn family_round_trip_preserves_side_and_members() {
        let family = SolutionFamily {
            particular: random_tensor(2, 1, 2, 102),
            projector: random_tensor(2, 2, 2, 103),
            side: FreeSide::LeftFree,
        };
        let path = tmp("family.json");
        save_family(&family, &path).unwrap();
        let back = load_family(&path).unwrap();
        assert_eq!(back.side, FreeSide::LeftFree);
        assert_eq!(max_abs_diff(&back.particular, &family.particular).unwrap(), 0.0);
        assert_eq!(max_abs_diff(&back.projector, &family.projector).unwrap(), 0.0);
    }
}
