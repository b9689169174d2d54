//! Non-signaling boxes: representation, constructors, and checks.

pub mod cbox;
pub mod depolarize;
pub mod layout;
pub mod local;
pub mod make;
pub mod nonsignaling;

pub use cbox::{AnyBox, BoxFile, ConditionalBox};
pub use depolarize::depolarize;
pub use layout::{canonical_index, Cell};
pub use local::{is_local, local_residual};
pub use make::{
    all_violating_mass, apply_output_noise, chsh_error, chsh_errors_by_input, deterministic_box,
    flip_outputs, is_unbiased, make_isotropic_box, make_pr_box, make_quantum_box,
    make_singlet_box, output_biases, satisfies_chsh, tensor_boxes,
};
pub use nonsignaling::{check_interfaces, validate_nonsignaling, Interface, NonSignalingReport};
