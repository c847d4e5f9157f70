//! Plain-text checkpoints.
//!
//! ```text
//! # meta model=dgcn alpha=1 beta=1 input=C hidden=H classes=F layers=L
//! # layer=conv0 rows=C cols=H
//! <C rows of H tab-separated values>
//! # layer=head rows=3H cols=F
//! <3H rows>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::model::{DgcnModel, ModelDims, ModelKind};
use crate::error::{DgcnError, Result};
use crate::graph::io::{
    field, format_dense_rows, header_value, parse_dense_rows, parse_header, read_text, write_text,
};

pub fn format_checkpoint(model: &DgcnModel, comments: &[String]) -> String {
    let d = model.dims();
    let mut out = format!(
        "# meta model={} alpha={} beta={} input={} hidden={} classes={} layers={}\n",
        model.kind().name(),
        model.alpha(),
        model.beta(),
        d.input,
        d.hidden,
        d.classes,
        d.layers
    );
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for (name, m) in model.parameter_names().iter().zip(model.parameters()) {
        let _ = writeln!(out, "# layer={name} rows={} cols={}", m.n_rows(), m.n_cols());
        format_dense_rows(&mut out, m);
    }
    out
}

pub fn save_checkpoint(path: &Path, model: &DgcnModel, comments: &[String]) -> Result<()> {
    write_text(path, &format_checkpoint(model, comments))
}

pub fn parse_checkpoint(text: &str, source: &str) -> Result<DgcnModel> {
    let mut meta = None;
    let mut blocks = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();
    while let Some((line, l)) = lines.next() {
        if l.starts_with("# meta") {
            meta = Some((line, parse_header(l, source)?));
        } else if l.starts_with("# layer=") {
            let h = parse_header(l, source)?;
            let name: String = header_value(&h, "layer", source, line)?;
            let rows: usize = header_value(&h, "rows", source, line)?;
            let cols: usize = header_value(&h, "cols", source, line)?;
            let mut body = std::iter::from_fn(|| lines.next_if(|(_, l)| !l.starts_with('#')));
            blocks.push((name, parse_dense_rows(&mut body, rows, cols, source)?));
        } else if !l.starts_with('#') {
            return Err(DgcnError::Parse {
                path: source.to_string(),
                line,
                msg: "matrix row outside a layer block".into(),
            });
        }
    }
    let (line, meta) = meta.ok_or_else(|| DgcnError::Format(format!("{source}: missing '# meta' line")))?;
    let kind: String = header_value(&meta, "model", source, line)?;
    let kind: ModelKind = kind.parse().map_err(|_| DgcnError::Parse {
        path: source.to_string(),
        line,
        msg: format!("unknown model {kind:?}"),
    })?;
    let get = |k: &str| -> Result<String> { header_value(&meta, k, source, line) };
    let dims = ModelDims {
        input: field(&get("input")?, "input", source, line)?,
        hidden: field(&get("hidden")?, "hidden", source, line)?,
        classes: field(&get("classes")?, "classes", source, line)?,
        layers: field(&get("layers")?, "layers", source, line)?,
    };
    let alpha: f64 = field(&get("alpha")?, "alpha", source, line)?;
    let beta: f64 = field(&get("beta")?, "beta", source, line)?;

    let head = blocks
        .pop()
        .filter(|(name, _)| name == "head")
        .ok_or_else(|| DgcnError::Format(format!("{source}: last block must be 'head'")))?
        .1;
    for (l, (name, _)) in blocks.iter().enumerate() {
        if *name != format!("conv{l}") {
            return Err(DgcnError::Format(format!(
                "{source}: expected block conv{l}, found {name}"
            )));
        }
    }
    let convs = blocks.into_iter().map(|(_, m)| m).collect();
    DgcnModel::from_parameters(kind, dims, convs, head, alpha, beta)
}

pub fn load_checkpoint(path: &Path) -> Result<DgcnModel> {
    parse_checkpoint(&read_text(path)?, &path.display().to_string())
}
