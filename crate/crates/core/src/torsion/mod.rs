mod breaks;
mod certify;
mod model;
mod mu_p;
mod newton;
mod roots;

pub use breaks::{ramification_breaks, BreakRow, BreakTable};
pub use certify::{certify_division_polynomial, certify_torsion_degree, torsion_count, CountCertificate, DegreeCertificate};
pub use model::{LElem, ModelSummary, TorsionFieldModel};
pub use mu_p::{mu_p_membership, MuPReport};
pub use newton::{newton_polygon, newton_polygon_of, NewtonPolygon, Segment};
pub use roots::{
    apply_p, assumption_check, count_roots, digit_scalars, distance_profile, enumerate_torsion, AssumptionCertificate,
    Distance, DistanceProfile, RootCount, TorsionEnumeration,
};
