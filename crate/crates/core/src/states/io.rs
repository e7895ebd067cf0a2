//! Channel files: UTF-8 JSON documents with extension `.wtc.json`.
//!
//! Schema:
//! ```json
//! {
//!   "symbols": ["0", "1"],
//!   "p_x": [0.5, 0.5],            // optional
//!   "d_b": 2,
//!   "d_e": 2,
//!   "outputs": [ [[re, im], ...], ... ]
//! }
//! ```
//! `outputs[i]` is the row-major (d_b·d_e)² entry list of `ρ_BE^x` for the
//! i-th symbol, each entry a `[re, im]` pair. Floats are written with 17
//! significant digits, so save→load round trips are exact.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DensityOperator, HermitianOperator};
use crate::states::WiretapChannel;
use crate::textfmt::sig17;

#[derive(Deserialize)]
struct ChannelFile {
    symbols: Vec<String>,
    #[serde(default)]
    p_x: Option<Vec<f64>>,
    d_b: usize,
    d_e: usize,
    outputs: Vec<Vec<[f64; 2]>>,
}

/// Parse and validate a `.wtc.json` channel file.
pub fn load_channel(path: impl AsRef<Path>) -> Result<WiretapChannel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let raw: ChannelFile = serde_json::from_str(&text)
        .map_err(|e| Error::ChannelParse(format!("{}: {e}", path.display())))?;

    if raw.outputs.len() != raw.symbols.len() {
        return Err(Error::ChannelValidation(format!(
            "field `outputs` has {} entries for {} symbols",
            raw.outputs.len(),
            raw.symbols.len()
        )));
    }
    let dim = raw.d_b * raw.d_e;
    let mut outputs = Vec::with_capacity(raw.outputs.len());
    for (sym, entries) in raw.symbols.iter().zip(&raw.outputs) {
        if entries.len() != dim * dim {
            return Err(Error::ChannelValidation(format!(
                "symbol {sym:?}: output has {} entries, expected (d_b·d_e)² = {}",
                entries.len(),
                dim * dim
            )));
        }
        let data = entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        let mat = CMatrix::from_data(dim, data)?;
        let herm = HermitianOperator::new(mat)
            .map_err(|e| Error::ChannelValidation(format!("symbol {sym:?}: {e}")))?;
        let rho = DensityOperator::new(herm)
            .map_err(|e| Error::ChannelValidation(format!("symbol {sym:?}: {e}")))?;
        outputs.push(rho);
    }
    WiretapChannel::new(raw.symbols, raw.d_b, raw.d_e, outputs, raw.p_x)
}

/// Write a channel file; see the module docs for the schema.
pub fn save_channel(ch: &WiretapChannel, path: impl AsRef<Path>) -> Result<()> {
    let mut s = String::new();
    s.push_str("{\n");

    s.push_str("  \"symbols\": [");
    for (i, sym) in ch.symbols().iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&serde_json::to_string(sym).expect("string serialization is infallible"));
    }
    s.push_str("],\n");

    if let Some(p_x) = ch.declared_p_x() {
        s.push_str("  \"p_x\": [");
        for (i, p) in p_x.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&sig17(*p));
        }
        s.push_str("],\n");
    }

    s.push_str(&format!("  \"d_b\": {},\n", ch.d_b()));
    s.push_str(&format!("  \"d_e\": {},\n", ch.d_e()));

    s.push_str("  \"outputs\": [\n");
    for (i, out) in ch.outputs().iter().enumerate() {
        s.push_str("    [");
        for (k, z) in out.matrix().data().iter().enumerate() {
            if k > 0 {
                s.push_str(", ");
            }
            s.push_str(&format!("[{}, {}]", sig17(z.re), sig17(z.im)));
        }
        s.push(']');
        if i + 1 < ch.outputs().len() {
            s.push(',');
        }
        s.push('\n');
    }
    s.push_str("  ]\n}\n");

    fs::write(path, s)?;
    Ok(())
}
