use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::series::Poly;

/// One edge of a Newton polygon. `slope` is the rise over run of the edge
/// (so slopes increase left to right); the roots it accounts for have
/// valuation `-slope`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "ser_ratio")]
    pub slope: Ratio<i64>,
    pub length: usize,
}

impl Segment {
    pub fn root_valuation(&self) -> Ratio<i64> {
        -self.slope
    }
}

pub(crate) fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Lower convex hull of `(i, v(c_i))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Horizontal extent.
    pub fn width(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.segments.len() == 1
    }

    /// `(root valuation, multiplicity)` per edge, smallest valuation first.
    pub fn root_valuations(&self) -> Vec<(Ratio<i64>, usize)> {
        let mut v: Vec<_> = self.segments.iter().map(|s| (s.root_valuation(), s.length)).collect();
        v.reverse();
        v
    }
}

/// Newton polygon of points `(i, v_i)`, `i` increasing. Coefficients that
/// read as zero (`Infinite`) are only known to have valuation `>= cap`; the
/// first and last points must be finite, and a zero reading strictly below
/// the hull's height `cap` would make the hull undetermined.
pub fn newton_polygon(points: &[(usize, Valuation)], cap: i64) -> Result<NewtonPolygon> {
    let finite: Vec<(usize, i64)> = points
        .iter()
        .filter_map(|&(i, v)| v.finite().map(|v| (i, v)))
        .collect();
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return Err(Error::Polygon("no points".into()));
    };
    if first.1.is_infinite() || last.1.is_infinite() {
        return Err(Error::PrecisionInsufficient("endpoint of the Newton polygon reads as zero".into()));
    }
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &finite {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a-pt
            let lhs = (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            let rhs = (pt.1 - a.1) as i128 * (b.0 - a.0) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    for &(i, v) in points {
        if v.is_infinite() {
            let k = hull.partition_point(|&(j, _)| j < i);
            let (a, b) = (hull[k - 1], hull[k]);
            // height of the hull at i, compared with cap without division
            let num = a.1 as i128 * (b.0 - i) as i128 + b.1 as i128 * (i - a.0) as i128;
            if num > cap as i128 * (b.0 - a.0) as i128 {
                return Err(Error::PrecisionInsufficient(format!(
                    "coefficient {i} reads as zero below the hull"
                )));
            }
        }
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment { slope: Ratio::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64), length: w[1].0 - w[0].0 })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// Newton polygon of a polynomial over `O_K` in `v_p`.
pub fn newton_polygon_of(poly: &Poly) -> Result<NewtonPolygon> {
    let pts: Vec<(usize, Valuation)> = poly.coeffs().iter().enumerate().map(|(i, c)| (i, c.valuation())).collect();
    newton_polygon(&pts, poly.descriptor().precision() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingDescriptor;

    #[test]
    fn examples() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let np = newton_polygon_of(&Poly::from_ints(&d, &[3, 0, 1])).unwrap();
        assert!(np.is_pure());
        assert_eq!(np.segments[0].root_valuation(), Ratio::new(1, 2));
        let np = newton_polygon_of(&Poly::from_ints(&d, &[9, 3, 1])).unwrap();
        assert_eq!(np.vertices, vec![(0, 2), (2, 0)]);
        assert_eq!(np.segments, vec![Segment { slope: Ratio::from_integer(-1), length: 2 }]);
        let np = newton_polygon_of(&Poly::from_ints(&d, &[27, 1, 3, 1])).unwrap();
        assert_eq!(np.vertices, vec![(0, 3), (1, 0), (3, 0)]);
        assert_eq!(np.root_valuations(), vec![(Ratio::from_integer(0), 2), (Ratio::from_integer(3), 1)]);
        assert_eq!(np.width(), 3);
    }

    #[test]
    fn zero_reading_below_hull_is_refused() {
        let pts = [(0, Valuation::Finite(8)), (1, Valuation::Infinite), (2, Valuation::Finite(0))];
        assert!(newton_polygon(&pts, 3).is_err());
        assert!(newton_polygon(&pts, 8).is_ok());
    }
}
