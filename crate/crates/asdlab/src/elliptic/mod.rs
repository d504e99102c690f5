//! Weierstrass curves over Q and quadratic fields: reduction and point
//! counting, division polynomials, Vélu isogenies and their action on first
//! de Rham cohomology, and eigenbases of complex multiplication.

pub mod analytic;
pub mod cm;
pub mod count;
pub mod curve;
pub mod divpoly;
pub mod kernel;
pub mod point;
pub mod poly;
pub mod velu;

pub use analytic::{cm_j_from_disc, cm_j_from_form, ramanujan_pi, ramanujan_pi_error, RamanujanSeries};
pub use cm::{cm_eigenbasis, cm_eigenbasis_with_ell, norm_primes, CmEigenbasis};
pub use count::{count_ext, count_over_fq, count_reduction, reduce_and_count, reduce_coeffs};
pub use curve::{
    j_line_family, legendre_family, tate_u_family, weierstrass_u_family, Curve, DeRhamVec, FamilyModel, Frame,
    ShortCurve, Transform,
};
pub use divpoly::{division_poly, division_xparts, multiplication_x_map, torsion_xsum, DivPoly};
pub use kernel::{kernel_search, kernel_search_with_height, DEFAULT_HEIGHT};
pub use point::Point;
pub use poly::Poly;
pub use velu::{mat_apply, mat_det, mat_mul, velu_from_point, velu_from_poly, Isogeny, Mat2};
