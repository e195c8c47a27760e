//! Exact arithmetic for lattices over the localization of the integers at a
//! prime p: canonical Hermite forms, the lattice-class model of the affine
//! building with its distance, orders in the matrix algebra together with
//! their Jacobson radicals and idealizer chains, and the polytrope, ball and
//! bolytrope orders cut out by exponent matrices.
//!
//! ```
//! use bolytrope_core::{
//!     ball, bolytrope_order, class_of, invariant_classes, radical_idealizer_chain, Apartment,
//!     ExponentMatrix, Lattice, PAdicContext,
//! };
//!
//! let ctx = PAdicContext::new(2)?;
//! let apartment = Apartment::standard(ctx, 2);
//!
//! // the classes within distance one of the standard lattice: a tree star
//! let center = class_of(&Lattice::standard(ctx, 2));
//! assert_eq!(ball(&center, 1, 1000)?.len(), 4);
//!
//! // a bolytrope order and the chain walking it back to its central segment
//! let m = ExponentMatrix::from_rows(&[vec![0, 7], vec![0, 0]])?;
//! let order = bolytrope_order(&apartment, &m, 1);
//! assert_eq!(invariant_classes(&order, 1000)?.len(), 18);
//! let chain = radical_idealizer_chain(&order)?;
//! assert_eq!(invariant_classes(&chain[1], 1000)?.len(), 8);
//! # Ok::<(), bolytrope_core::Error>(())
//! ```

pub mod building;
pub mod dot;
pub mod error;
pub mod fp;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod order;
pub mod polytrope;
pub mod sampling;
pub mod valuation;
pub mod verify;

pub use building::{
    ball, ball_around_set, class_of, convex_hull, geodesic, invariant_classes, is_simplex,
    neighbors, Apartment, ClassSet, LatticeClass, DEFAULT_CLASS_CAP,
};
pub use error::{Error, Result};
pub use lattice::{
    class_distance, compatible_bases, lattice_in_frame, smith_valuations, transporter, Lattice,
};
pub use matrix::RationalMatrix;
pub use order::{
    closure, degree_exact_small, endomorphism_order, idealizer, is_closed, is_order_lattice,
    jacobson_radical, pz_order, radical_idealizer_chain, residue_algebra, Order, ResidueAlgebra,
    DEFAULT_DEGREE_BOUND,
};
pub use polytrope::{
    apartment_slice, ball_order, bolystar_generators, bolytrope, bolytrope_order,
    central_polytrope, d2_canonical_form, graduated_order, is_graduated_in_frame,
    normalize_base_point, polytrope_class_set, polytrope_points, projective_classes,
    star_configuration, triangle_closure, CanonicalD2, CentralPolytrope, ExponentMatrix,
    StarConfiguration,
};
pub use valuation::{PAdicContext, Scalar, Valuation};
