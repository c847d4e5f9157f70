//! Stratified train / validation / test splits.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DgcnError, Result};
use crate::graph::io::{body_lines, field};
use crate::graph::LabelVector;

/// Disjoint node sets of one experimental run, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitAssignment {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Draws `per_class` training nodes from every class, then `val_size`
/// validation nodes uniformly from the remaining labeled nodes. Every other
/// labeled node is a test node.
pub fn make_split(
    y: &LabelVector,
    per_class: usize,
    val_size: usize,
    seed: u64,
) -> Result<SplitAssignment> {
    let n_classes = y.n_classes();
    if n_classes == 0 {
        return Err(DgcnError::Protocol("no labeled nodes".into()));
    }
    let mut by_class = vec![Vec::new(); n_classes];
    for (node, c) in y.labeled_nodes() {
        by_class[c].push(node);
    }
    if let Some((c, members)) = by_class.iter().enumerate().find(|(_, m)| m.len() < per_class) {
        return Err(DgcnError::Protocol(format!(
            "class {c} has {} labeled nodes, need {per_class} for training",
            members.len()
        )));
    }
    let n_labeled: usize = by_class.iter().map(Vec::len).sum();
    let needed = per_class * n_classes + val_size + 1;
    if n_labeled < needed {
        return Err(DgcnError::Protocol(format!(
            "{n_labeled} labeled nodes, need at least {needed} \
             ({per_class} per class, {val_size} validation, 1 test)"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::with_capacity(per_class * n_classes);
    let mut rest = Vec::with_capacity(n_labeled - per_class * n_classes);
    for mut members in by_class {
        members.shuffle(&mut rng);
        train.extend_from_slice(&members[..per_class]);
        rest.extend_from_slice(&members[per_class..]);
    }
    rest.sort_unstable();
    rest.shuffle(&mut rng);
    let mut val = rest[..val_size].to_vec();
    let mut test = rest[val_size..].to_vec();
    train.sort_unstable();
    val.sort_unstable();
    test.sort_unstable();
    Ok(SplitAssignment {
        train,
        val,
        test,
        seed,
    })
}

/// `node<TAB>{train|val|test}` lines in ascending node order.
pub fn format_split(split: &SplitAssignment, comments: &[String]) -> String {
    let mut rows: Vec<(usize, &str)> = split
        .train
        .iter()
        .map(|&n| (n, "train"))
        .chain(split.val.iter().map(|&n| (n, "val")))
        .chain(split.test.iter().map(|&n| (n, "test")))
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for (n, set) in rows {
        let _ = writeln!(out, "{n}\t{set}");
    }
    out
}

/// Parses a split file. The seed is not stored in the format and is set to 0.
pub fn parse_split(text: &str, n_nodes: usize, source: &str) -> Result<SplitAssignment> {
    let mut split = SplitAssignment {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
        seed: 0,
    };
    let mut seen = vec![false; n_nodes];
    for (line, l) in body_lines(text) {
        let (node, set) = l.split_once('\t').ok_or_else(|| DgcnError::Parse {
            path: source.to_string(),
            line,
            msg: format!("expected node<TAB>set, found {l:?}"),
        })?;
        let node: usize = field(node, "node", source, line)?;
        if node >= n_nodes {
            return Err(DgcnError::Bounds(format!(
                "{source}:{line}: node {node} with {n_nodes} nodes"
            )));
        }
        if std::mem::replace(&mut seen[node], true) {
            return Err(DgcnError::Format(format!(
                "{source}:{line}: node {node} listed twice"
            )));
        }
        match set.trim() {
            "train" => split.train.push(node),
            "val" => split.val.push(node),
            "test" => split.test.push(node),
            other => {
                return Err(DgcnError::Parse {
                    path: source.to_string(),
                    line,
                    msg: format!("unknown set {other:?}"),
                })
            }
        }
    }
    for set in [&mut split.train, &mut split.val, &mut split.test] {
        set.sort_unstable();
    }
    Ok(split)
}
