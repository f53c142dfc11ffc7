//! The `L_p` duality pairing `(A u, |u|^{p−2} u 1_{[u≠0]})` on the torus.

pub mod checks;
pub mod quadrature;
pub mod test_function;

pub use checks::{
    gradient_inequality_check, operator_gradient, p_integrand, rotated_accretivity_check,
    rotated_accretivity_sweep, sectorial_check, AccretivityCheck, GradientCheck, SectorialCheck,
};
pub use quadrature::{
    apply_operator, grid_point, ibp_residual, pairing_direct, pairing_via_forms, PairingValue,
    XiEta,
};
pub use test_function::{TestFunction, TrigPoly};
