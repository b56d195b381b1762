//! Exact algebra for deciding Liouvillian integrability of `y'' = M(x) y`
//! with polynomial `M`, building polynomial-hyperexponential solutions, and
//! generating the equations of spectral varieties.

pub mod aim;
pub mod diffalg;
pub mod exact;
pub mod kovacic;
pub mod reduce;
pub mod schrod;
pub mod spectral;
