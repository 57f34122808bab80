//! JSON persistence for subspace codes.
//!
//! The on-disk layout is `{"T", "M", "K", "points"}` where each point is the
//! row-major list of its T×M basis entries, every entry a `[re, im]` pair.
//! Loading validates orthonormality; with `repair` set, near-orthonormal or
//! merely full-rank bases are canonicalized instead of rejected.

use crate::grassmann::{orthonormalize, Code, GrassmannPoint};
use crate::{C64, CMatrix, Error, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct CodeFile {
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    points: Vec<Vec<[f64; 2]>>,
}

/// Writes `code` as pretty-printed JSON.
pub fn save_code(code: &Code, path: &Path) -> Result<()> {
    let (t, m) = (code.ambient_dim(), code.subspace_dim());
    let points = code
        .points()
        .iter()
        .map(|point| {
            let basis = point.basis();
            (0..t)
                .flat_map(|r| (0..m).map(move |c| [basis[(r, c)].re, basis[(r, c)].im]))
                .collect()
        })
        .collect();
    let file = CodeFile { t, m, k: code.len(), points };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// Reads a code back. With `repair` false every stored basis must already be
/// orthonormal; with `repair` true each basis is re-canonicalized, so files
/// rounded by other tools or written column-scaled still load.
pub fn load_code(path: &Path, repair: bool) -> Result<Code> {
    let file: CodeFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.points.len() != file.k {
        return Err(Error::InvalidCodeFile(format!(
            "header says K = {} but the file holds {} points",
            file.k,
            file.points.len()
        )));
    }
    let mut points = Vec::with_capacity(file.k);
    for (index, entries) in file.points.iter().enumerate() {
        if entries.len() != file.t * file.m {
            return Err(Error::InvalidCodeFile(format!(
                "point {index} holds {} entries, expected T*M = {}",
                entries.len(),
                file.t * file.m
            )));
        }
        let raw = CMatrix::from_fn(file.t, file.m, |r, c| {
            let [re, im] = entries[r * file.m + c];
            C64::new(re, im)
        });
        let point = if repair {
            orthonormalize(&raw)?
        } else {
            GrassmannPoint::new(raw).map_err(|err| match err {
                Error::InvalidCodeFile(detail) => {
                    Error::InvalidCodeFile(format!("point {index}: {detail}"))
                }
                other => other,
            })?
        };
        points.push(point);
    }
    Code::new(points)
}
