//! Neural stack: directed convolution, fusion, dense head, loss, exact
//! gradients, initialization, dropout and Adam.

pub mod adam;
pub mod checkpoint;
pub mod init;
pub mod loss;
pub mod model;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{format_checkpoint, load_checkpoint, parse_checkpoint, save_checkpoint};
pub use init::{dropout_mask, glorot_init, glorot_init_seeded};
pub use loss::{cross_entropy_from_logits, masked_cross_entropy, softmax_rows};
pub use model::{
    conv_layer_forward, sgc_dgcn_forward, sgc_propagate, DgcnModel, ForwardTrace, LayerTrace,
    Mode, ModelDims, ModelKind,
};
