//! The directed graph convolution model and its exact reverse pass.
//!
//! One conv layer maps `H (N×in)` to
//!
//! ```text
//! Z = [ ReLU(Â_F·H·Θ) | α·ReLU(Â_S_in·H·Θ) | β·ReLU(Â_S_out·H·Θ) ]   (N×3·hidden)
//! ```
//!
//! with a single `Θ` shared by the three branches. Layers are chained (the
//! input width of every layer after the first is `3·hidden`) and a dense head
//! `Θ_head (3·hidden × classes)` produces the logits.
//!
//! The SGC variant replaces all conv layers by the fixed linear propagation
//! `S′X = [Â_F·X | α·Â_S_in·X | β·Â_S_out·X]` followed by the head alone.

use std::borrow::Cow;

use rand::RngCore;

use super::init::{dropout_mask, glorot_init};
use super::loss::{cross_entropy_from_logits, cross_entropy_grad, softmax_rows};
use crate::error::{DgcnError, Result};
use crate::graph::{DenseMatrix, LabelVector};
use crate::proximity::ProximitySet;

/// Forward-pass mode. Dropout only fires in `Train`.
pub enum Mode<'a> {
    Eval,
    Train {
        dropout: f64,
        rng: &'a mut dyn RngCore,
    },
}

impl Mode<'_> {
    fn mask(&mut self, rows: usize, cols: usize) -> Result<Option<DenseMatrix>> {
        match self {
            Mode::Eval => Ok(None),
            Mode::Train { dropout, rng } => dropout_mask(rows, cols, *dropout, &mut **rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelDims {
    pub input: usize,
    pub hidden: usize,
    pub classes: usize,
    pub layers: usize,
}

/// Cached activations of one conv layer.
#[derive(Debug, Clone)]
pub struct LayerTrace {
    /// Layer input after dropout.
    pub input: DenseMatrix,
    pub input_mask: Option<DenseMatrix>,
    /// Branch pre-activations `Â_b·H·Θ` in fusion order.
    pub pre: [DenseMatrix; 3],
    pub output: DenseMatrix,
}

#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub layers: Vec<LayerTrace>,
    /// Head input after dropout.
    pub head_input: DenseMatrix,
    pub head_mask: Option<DenseMatrix>,
    pub logits: DenseMatrix,
    pub probs: DenseMatrix,
}

fn apply_mask(h: &DenseMatrix, mask: &Option<DenseMatrix>) -> Result<DenseMatrix> {
    match mask {
        Some(m) => h.hadamard(m),
        None => Ok(h.clone()),
    }
}

fn check_fusion_weights(alpha: f64, beta: f64) -> Result<()> {
    if alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite() {
        Ok(())
    } else {
        Err(DgcnError::Domain(format!(
            "fusion weights must be finite and >= 0 (alpha={alpha}, beta={beta})"
        )))
    }
}

/// One directed convolution layer. `dropout_mask`, when given, multiplies
/// the input entrywise before propagation.
pub fn conv_layer_forward(
    p: &ProximitySet,
    h: &DenseMatrix,
    theta: &DenseMatrix,
    alpha: f64,
    beta: f64,
    dropout_mask: Option<DenseMatrix>,
) -> Result<(DenseMatrix, LayerTrace)> {
    check_fusion_weights(alpha, beta)?;
    if h.n_rows() != p.n_nodes() {
        return Err(DgcnError::Shape(format!(
            "layer input has {} rows for {} nodes",
            h.n_rows(),
            p.n_nodes()
        )));
    }
    let input = apply_mask(h, &dropout_mask)?;
    // Â·(H·Θ) is cheaper than (Â·H)·Θ whenever hidden < in_dim
    let projected = input.matmul(theta)?;
    let [f, s_in, s_out] = p.operators();
    let pre = [
        f.spmm(&projected)?,
        s_in.spmm(&projected)?,
        s_out.spmm(&projected)?,
    ];
    let relu = |m: &DenseMatrix, s: f64| m.map(|v| s * v.max(0.0));
    let output = DenseMatrix::hcat(&[
        &relu(&pre[0], 1.0),
        &relu(&pre[1], alpha),
        &relu(&pre[2], beta),
    ])?;
    Ok((
        output.clone(),
        LayerTrace {
            input,
            input_mask: dropout_mask,
            pre,
            output,
        },
    ))
}

/// `S′X = [Â_F·X | α·Â_S_in·X | β·Â_S_out·X]`.
pub fn sgc_propagate(p: &ProximitySet, x: &DenseMatrix, alpha: f64, beta: f64) -> Result<DenseMatrix> {
    check_fusion_weights(alpha, beta)?;
    let [f, s_in, s_out] = p.operators();
    DenseMatrix::hcat(&[
        &f.spmm(x)?,
        &s_in.spmm(x)?.scale(alpha),
        &s_out.spmm(x)?.scale(beta),
    ])
}

/// `softmax(S′X·Θ)`, the SGC model driven by the proximity concatenation.
pub fn sgc_dgcn_forward(
    p: &ProximitySet,
    x: &DenseMatrix,
    theta: &DenseMatrix,
    alpha: f64,
    beta: f64,
) -> Result<DenseMatrix> {
    Ok(softmax_rows(&sgc_propagate(p, x, alpha, beta)?.matmul(theta)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Dgcn,
    Sgc,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Dgcn => "dgcn",
            ModelKind::Sgc => "sgc",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = DgcnError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dgcn" => Ok(ModelKind::Dgcn),
            "sgc" => Ok(ModelKind::Sgc),
            other => Err(DgcnError::Usage(format!("unknown model {other:?}"))),
        }
    }
}

/// Trainable parameters plus the fixed fusion weights.
///
/// For `ModelKind::Dgcn`, `conv_thetas[l]` is `in_l × hidden` with
/// `in_0 = input` and `in_l = 3·hidden` afterwards, and the head is
/// `3·hidden × classes`. For `ModelKind::Sgc` there are no conv layers and
/// the head is `3·input × classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct DgcnModel {
    kind: ModelKind,
    conv_thetas: Vec<DenseMatrix>,
    head_theta: DenseMatrix,
    alpha: f64,
    beta: f64,
    dims: ModelDims,
}

impl DgcnModel {
    /// Glorot-initialized model. `dims.layers` is ignored for SGC.
    pub fn init(
        kind: ModelKind,
        dims: ModelDims,
        alpha: f64,
        beta: f64,
        rng: &mut dyn RngCore,
    ) -> Result<Self> {
        let (conv_shapes, head_shape) = Self::shapes(kind, dims)?;
        let conv_thetas = conv_shapes
            .iter()
            .map(|&(r, c)| glorot_init(r, c, rng))
            .collect::<Result<Vec<_>>>()?;
        let head_theta = glorot_init(head_shape.0, head_shape.1, rng)?;
        Self::from_parameters(kind, dims, conv_thetas, head_theta, alpha, beta)
    }

    pub fn from_parameters(
        kind: ModelKind,
        dims: ModelDims,
        conv_thetas: Vec<DenseMatrix>,
        head_theta: DenseMatrix,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        check_fusion_weights(alpha, beta)?;
        let (conv_shapes, head_shape) = Self::shapes(kind, dims)?;
        let got: Vec<_> = conv_thetas.iter().map(DenseMatrix::shape).collect();
        if got != conv_shapes || head_theta.shape() != head_shape {
            return Err(DgcnError::Shape(format!(
                "parameters {got:?} + {:?} do not match dims {dims:?}",
                head_theta.shape()
            )));
        }
        let dims = match kind {
            ModelKind::Dgcn => dims,
            ModelKind::Sgc => ModelDims { layers: 0, ..dims },
        };
        Ok(Self {
            kind,
            conv_thetas,
            head_theta,
            alpha,
            beta,
            dims,
        })
    }

    fn shapes(kind: ModelKind, d: ModelDims) -> Result<(Vec<(usize, usize)>, (usize, usize))> {
        if d.input == 0 || d.classes == 0 {
            return Err(DgcnError::Shape(format!("degenerate dims {d:?}")));
        }
        match kind {
            ModelKind::Dgcn => {
                if d.hidden == 0 || d.layers == 0 {
                    return Err(DgcnError::Shape(format!(
                        "dgcn needs hidden > 0 and layers > 0, got {d:?}"
                    )));
                }
                let conv = (0..d.layers)
                    .map(|l| (if l == 0 { d.input } else { 3 * d.hidden }, d.hidden))
                    .collect();
                Ok((conv, (3 * d.hidden, d.classes)))
            }
            ModelKind::Sgc => Ok((Vec::new(), (3 * d.input, d.classes))),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dims(&self) -> ModelDims {
        self.dims
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn conv_thetas(&self) -> &[DenseMatrix] {
        &self.conv_thetas
    }

    pub fn head_theta(&self) -> &DenseMatrix {
        &self.head_theta
    }

    /// Parameter matrices in canonical order: conv layers, then head.
    pub fn parameters(&self) -> Vec<&DenseMatrix> {
        self.conv_thetas.iter().chain([&self.head_theta]).collect()
    }

    pub fn parameters_mut(&mut self) -> Vec<&mut DenseMatrix> {
        self.conv_thetas
            .iter_mut()
            .chain([&mut self.head_theta])
            .collect()
    }

    /// Canonical names matching [`DgcnModel::parameters`].
    pub fn parameter_names(&self) -> Vec<String> {
        (0..self.conv_thetas.len())
            .map(|l| format!("conv{l}"))
            .chain(["head".to_string()])
            .collect()
    }

    pub fn n_parameters(&self) -> usize {
        self.parameters().iter().map(|m| m.data().len()).sum()
    }

    /// Which parameters carry the L2 penalty: every conv layer, or the single
    /// weight matrix of the SGC variant.
    fn regularized(&self) -> Vec<bool> {
        match self.kind {
            ModelKind::Dgcn => (0..self.conv_thetas.len())
                .map(|_| true)
                .chain([false])
                .collect(),
            ModelKind::Sgc => vec![true],
        }
    }

    /// Model input derived from raw features: `X` itself for DGCN, the fixed
    /// propagation `S′X` for SGC.
    pub fn prepare_input<'a>(
        &self,
        p: &ProximitySet,
        x: &'a DenseMatrix,
    ) -> Result<Cow<'a, DenseMatrix>> {
        if x.n_cols() != self.dims.input {
            return Err(DgcnError::Shape(format!(
                "features have {} columns, model expects {}",
                x.n_cols(),
                self.dims.input
            )));
        }
        match self.kind {
            ModelKind::Dgcn => Ok(Cow::Borrowed(x)),
            ModelKind::Sgc => Ok(Cow::Owned(sgc_propagate(p, x, self.alpha, self.beta)?)),
        }
    }

    /// Forward pass over a prepared input (see [`DgcnModel::prepare_input`]).
    pub fn forward(
        &self,
        p: &ProximitySet,
        input: &DenseMatrix,
        mut mode: Mode<'_>,
    ) -> Result<ForwardTrace> {
        let mut h = Cow::Borrowed(input);
        let mut layers = Vec::with_capacity(self.conv_thetas.len());
        for theta in &self.conv_thetas {
            let mask = mode.mask(h.n_rows(), h.n_cols())?;
            let (out, trace) = conv_layer_forward(p, &h, theta, self.alpha, self.beta, mask)?;
            layers.push(trace);
            h = Cow::Owned(out);
        }
        let head_mask = match self.kind {
            ModelKind::Dgcn => mode.mask(h.n_rows(), h.n_cols())?,
            ModelKind::Sgc => None,
        };
        let head_input = apply_mask(&h, &head_mask)?;
        let logits = head_input.matmul(&self.head_theta)?;
        let probs = softmax_rows(&logits);
        Ok(ForwardTrace {
            layers,
            head_input,
            head_mask,
            logits,
            probs,
        })
    }

    /// Class probabilities from raw features, eval mode.
    pub fn predict(&self, p: &ProximitySet, x: &DenseMatrix) -> Result<DenseMatrix> {
        let input = self.prepare_input(p, x)?;
        Ok(self.forward(p, &input, Mode::Eval)?.probs)
    }

    /// Eval-mode node embeddings: the first conv layer output (N × 3·hidden)
    /// for DGCN, `S′X` for SGC.
    pub fn embeddings(&self, p: &ProximitySet, x: &DenseMatrix) -> Result<DenseMatrix> {
        let input = self.prepare_input(p, x)?;
        let mut trace = self.forward(p, &input, Mode::Eval)?;
        Ok(if trace.layers.is_empty() {
            trace.head_input
        } else {
            trace.layers.swap_remove(0).output
        })
    }

    pub fn l2_penalty(&self, l2: f64) -> f64 {
        self.parameters()
            .iter()
            .zip(self.regularized())
            .filter(|(_, r)| *r)
            .map(|(m, _)| l2 * m.frobenius_sq())
            .sum()
    }

    /// Training objective: summed masked cross-entropy plus the L2 penalty.
    pub fn loss(&self, trace: &ForwardTrace, y: &LabelVector, mask: &[usize], l2: f64) -> Result<f64> {
        Ok(cross_entropy_from_logits(&trace.logits, y, mask)? + self.l2_penalty(l2))
    }

    /// Exact gradients of [`DgcnModel::loss`] for every parameter, in
    /// [`DgcnModel::parameters`] order. Dropout masks are replayed from the
    /// trace.
    pub fn backward(
        &self,
        p: &ProximitySet,
        trace: &ForwardTrace,
        y: &LabelVector,
        mask: &[usize],
        l2: f64,
    ) -> Result<Vec<DenseMatrix>> {
        if trace.layers.len() != self.conv_thetas.len()
            || trace.logits.n_cols() != self.head_theta.n_cols()
        {
            return Err(DgcnError::Shape("trace does not match model".into()));
        }
        let d_logits = cross_entropy_grad(&trace.probs, y, mask)?;
        let d_head = trace.head_input.t_matmul(&d_logits)?;

        let mut grads = vec![DenseMatrix::zeros(0, 0); self.conv_thetas.len()];
        if !self.conv_thetas.is_empty() {
            let mut d_h = apply_mask(&d_logits.matmul_t(&self.head_theta)?, &trace.head_mask)?;
            let hidden = self.dims.hidden;
            let scales = [1.0, self.alpha, self.beta];
            for (l, (layer, theta)) in trace.layers.iter().zip(&self.conv_thetas).enumerate().rev() {
                // Â_b is symmetric, so it serves as its own transpose
                let mut d_proj = DenseMatrix::zeros(layer.input.n_rows(), hidden);
                for (b, op) in p.operators().into_iter().enumerate() {
                    let gate = layer.pre[b].map(|v| if v > 0.0 { scales[b] } else { 0.0 });
                    let d_pre = d_h.col_block(b * hidden, hidden).hadamard(&gate)?;
                    d_proj.add_scaled(&op.spmm(&d_pre)?, 1.0)?;
                }
                grads[l] = layer.input.t_matmul(&d_proj)?;
                if l > 0 {
                    d_h = apply_mask(&d_proj.matmul_t(theta)?, &layer.input_mask)?;
                }
            }
        }
        grads.push(d_head);

        if l2 != 0.0 {
            for ((g, w), reg) in grads.iter_mut().zip(self.parameters()).zip(self.regularized()) {
                if reg {
                    g.add_scaled(w, 2.0 * l2)?;
                }
            }
        }
        Ok(grads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SparseMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn identity_prox(n: usize) -> ProximitySet {
        ProximitySet::from_operators(
            SparseMatrix::identity(n),
            SparseMatrix::identity(n),
            SparseMatrix::identity(n),
        )
        .unwrap()
    }

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn conv_layer_examples() {
        let p = identity_prox(2);
        let x = m(&[&[1.0, 2.0], &[0.5, 0.0]]);
        let (z, _) = conv_layer_forward(&p, &x, &DenseMatrix::identity(2), 1.0, 1.0, None).unwrap();
        assert_eq!(z, DenseMatrix::hcat(&[&x, &x, &x]).unwrap());

        let (z, _) = conv_layer_forward(&p, &x, &DenseMatrix::identity(2), 0.0, 0.0, None).unwrap();
        assert!(z.col_block(2, 4).data().iter().all(|&v| v == 0.0));

        let xn = m(&[&[1.0, -2.0], &[0.5, 0.0]]);
        let (z, _) = conv_layer_forward(&p, &xn, &DenseMatrix::identity(2), 1.0, 1.0, None).unwrap();
        for b in 0..3 {
            assert_eq!(z.get(0, 2 * b + 1), 0.0);
            assert_eq!(z.get(0, 2 * b), 1.0);
        }

        assert!(conv_layer_forward(&p, &x, &DenseMatrix::identity(2), -1.0, 1.0, None).is_err());
        assert!(conv_layer_forward(&p, &x, &DenseMatrix::identity(3), 1.0, 1.0, None).is_err());
    }

    #[test]
    fn scaling_commutes_with_relu() {
        let z = m(&[&[-1.5, 0.0, 2.25], &[3.0, -0.1, 1e-300]]);
        for s in [0.3, 1.0, 1.7] {
            let a = z.map(|v| (s * v).max(0.0));
            let b = z.map(|v| s * v.max(0.0));
            assert!(a.max_abs_diff(&b) <= 1e-12);
        }
    }

    #[test]
    fn zero_weights_give_uniform_predictions() {
        let dims = ModelDims { input: 2, hidden: 3, classes: 4, layers: 1 };
        let model = DgcnModel::from_parameters(
            ModelKind::Dgcn,
            dims,
            vec![DenseMatrix::zeros(2, 3)],
            DenseMatrix::zeros(9, 4),
            1.0,
            1.0,
        )
        .unwrap();
        let probs = model.predict(&identity_prox(2), &m(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap();
        assert!(probs.data().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn hand_computed_forward() {
        // L=1, hidden=1, classes=2, identity operators, α=β=1
        let x = m(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let theta = m(&[&[1.0], &[-1.0]]);
        let head = m(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.5]]);
        let model = DgcnModel::from_parameters(
            ModelKind::Dgcn,
            ModelDims { input: 2, hidden: 1, classes: 2, layers: 1 },
            vec![theta],
            head,
            1.0,
            1.0,
        )
        .unwrap();
        let probs = model.predict(&identity_prox(2), &x).unwrap();
        // node 0: XΘ = 1 -> z = [1,1,1], logits = [1.5, 1.5]; node 1: XΘ = -2 -> zeros
        assert_eq!(probs.row(0), &[0.5, 0.5]);
        assert_eq!(probs.row(1), &[0.5, 0.5]);

        let head = m(&[&[2.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]]);
        let model = DgcnModel::from_parameters(
            ModelKind::Dgcn,
            model.dims(),
            vec![m(&[&[1.0], &[-1.0]])],
            head,
            1.0,
            1.0,
        )
        .unwrap();
        let probs = model.predict(&identity_prox(2), &x).unwrap();
        let e2 = 2.0f64.exp();
        assert!((probs.get(0, 0) - e2 / (e2 + 1.0)).abs() < 1e-15);
        assert_eq!(probs.row(1), &[0.5, 0.5]);
    }

    #[test]
    fn parameter_count_and_sharing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dims = ModelDims { input: 5, hidden: 4, classes: 3, layers: 2 };
        let model = DgcnModel::init(ModelKind::Dgcn, dims, 1.0, 1.0, &mut rng).unwrap();
        assert_eq!(model.n_parameters(), 5 * 4 + 12 * 4 + 12 * 3);
        assert_eq!(model.parameter_names(), ["conv0", "conv1", "head"]);

        let sgc = DgcnModel::init(ModelKind::Sgc, dims, 1.0, 1.0, &mut rng).unwrap();
        assert_eq!(sgc.n_parameters(), 15 * 3);
        assert_eq!(sgc.dims().layers, 0);
    }

    #[test]
    fn eval_mode_is_deterministic_and_dropout_only_in_training() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dims = ModelDims { input: 3, hidden: 4, classes: 2, layers: 1 };
        let model = DgcnModel::init(ModelKind::Dgcn, dims, 1.0, 1.0, &mut rng).unwrap();
        let p = identity_prox(4);
        let x = glorot_init(4, 3, &mut rng).unwrap().map(f64::abs);
        let a = model.forward(&p, &x, Mode::Eval).unwrap();
        assert!(a.head_mask.is_none() && a.layers[0].input_mask.is_none());
        let b = model
            .forward(&p, &x, Mode::Train { dropout: 0.0, rng: &mut rng })
            .unwrap();
        assert_eq!(a.probs, b.probs);
        let c = model
            .forward(&p, &x, Mode::Train { dropout: 0.5, rng: &mut rng })
            .unwrap();
        assert!(c.head_mask.is_some() && c.layers[0].input_mask.is_some());
    }

    #[test]
    fn l2_gradient_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dims = ModelDims { input: 3, hidden: 2, classes: 2, layers: 2 };
        let model = DgcnModel::init(ModelKind::Dgcn, dims, 0.5, 1.5, &mut rng).unwrap();
        let p = identity_prox(3);
        let x = glorot_init(3, 3, &mut rng).unwrap();
        let y = LabelVector::new(vec![Some(0), Some(1), None]);
        let trace = model.forward(&p, &x, Mode::Eval).unwrap();
        let g0 = model.backward(&p, &trace, &y, &[0, 1], 0.0).unwrap();
        let g1 = model.backward(&p, &trace, &y, &[0, 1], 0.25).unwrap();
        for (i, w) in model.parameters().into_iter().enumerate() {
            let diff = {
                let mut d = g1[i].clone();
                d.add_scaled(&g0[i], -1.0).unwrap();
                d
            };
            let expected = if i < 2 { w.scale(0.5) } else { DenseMatrix::zeros(2 * 3, 2) };
            assert!(diff.max_abs_diff(&expected) <= 1e-15, "param {i}");
        }
    }

    #[test]
    fn unmasked_nodes_do_not_contribute() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dims = ModelDims { input: 2, hidden: 2, classes: 2, layers: 1 };
        let model = DgcnModel::init(ModelKind::Dgcn, dims, 1.0, 1.0, &mut rng).unwrap();
        let p = identity_prox(3);
        let x = glorot_init(3, 2, &mut rng).unwrap();
        let trace = model.forward(&p, &x, Mode::Eval).unwrap();
        let ya = LabelVector::new(vec![Some(0), Some(0), Some(1)]);
        let yb = LabelVector::new(vec![Some(0), Some(1), Some(0)]);
        let ga = model.backward(&p, &trace, &ya, &[0], 0.0).unwrap();
        let gb = model.backward(&p, &trace, &yb, &[0], 0.0).unwrap();
        assert_eq!(ga, gb);
    }

    #[test]
    fn sgc_forward_examples() {
        let p = identity_prox(2);
        let x = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let probs = sgc_dgcn_forward(&p, &x, &DenseMatrix::zeros(6, 3), 1.0, 1.0).unwrap();
        assert!(probs.data().iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));

        let theta = glorot_init(6, 2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let direct = softmax_rows(&DenseMatrix::hcat(&[&x, &x, &x]).unwrap().matmul(&theta).unwrap());
        let got = sgc_dgcn_forward(&p, &x, &theta, 1.0, 1.0).unwrap();
        assert!(got.max_abs_diff(&direct) <= 1e-15);
    }
}
