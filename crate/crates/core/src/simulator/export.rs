use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GraphState, GENERATOR_NAME};
use crate::error::{Error, Result};

/// Sidecar metadata written next to an edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeListMeta {
    #[serde(rename = "N")]
    pub clique_size: usize,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub seed: u64,
    pub steps: u64,
    pub generator: String,
}

/// Writes one `u v` line per edge (0-based ids, `u < v`, ordered by `u`
/// and then by insertion) and a `<path>.json` sidecar.
pub fn write_edge_list(state: &GraphState, path: &Path) -> Result<EdgeListMeta> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (u, v) in state.vertices().iter().enumerate() {
        for &nb in v.neighbors() {
            if (u as u32) < nb {
                writeln!(out, "{u} {nb}").map_err(|e| Error::io(path, e))?;
            }
        }
    }
    out.flush().map_err(|e| Error::io(path, e))?;

    let params = state.params();
    let meta = EdgeListMeta {
        clique_size: params.clique_size,
        p: params.p,
        q: params.q,
        r: params.r,
        seed: state.seed(),
        steps: state.steps(),
        generator: GENERATOR_NAME.to_string(),
    };
    let sidecar = path.with_extension("json");
    let json = serde_json::to_string_pretty(&meta)?;
    std::fs::write(&sidecar, json + "\n").map_err(|e| Error::io(&sidecar, e))?;
    Ok(meta)
}
