//! Points of the k-valued n-cube `{0,…,k-1}^n`, the dominance order, the
//! intersecting relation and the lower-half sets the bijection is defined on.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// The pair `(k, n)`: alphabet size and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeParams {
    k: u32,
    n: u32,
}

impl CubeParams {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams { k, n, reason: "k must be at least 2" });
        }
        if n < 1 {
            return Err(Error::InvalidParams { k, n, reason: "n must be at least 1" });
        }
        Ok(CubeParams { k, n })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// Largest coordinate value, `k - 1`.
    pub fn top(self) -> u32 {
        self.k - 1
    }

    /// `n(k-1)`, the weight of the all-top point.
    pub fn max_weight(self) -> u64 {
        u64::from(self.n) * u64::from(self.top())
    }

    /// `⌊n(k-1)/2⌋`: the largest weight on the low slice of `L_n`.
    pub fn g(self) -> u64 {
        self.max_weight() / 2
    }

    /// `⌊(n(k-1)-1)/2⌋`: the largest weight on the high slice of `L_n`.
    /// Always satisfies `g + 1 + g' = n(k-1)`.
    pub fn g_prime(self) -> u64 {
        (self.max_weight() - 1) / 2
    }

    /// `k^n`, or `None` on overflow.
    pub fn size(self) -> Option<u64> {
        u64::from(self.k).checked_pow(self.n)
    }

    /// The cube one dimension down, the codomain of the bijection.
    pub fn reduced(self) -> Result<CubeParams> {
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n });
        }
        Ok(CubeParams { k: self.k, n: self.n - 1 })
    }

    /// The cube one dimension up, whose lower half maps onto this one.
    pub fn extended(self) -> CubeParams {
        CubeParams { k: self.k, n: self.n + 1 }
    }

    pub fn point(self, coords: impl Into<Vec<u32>>) -> Result<Point> {
        let coords = coords.into();
        if coords.len() != self.n as usize {
            return Err(Error::WrongLength { expected: self.n as usize, got: coords.len() });
        }
        if let Some((position, &value)) = coords.iter().enumerate().find(|(_, &c)| c >= self.k) {
            return Err(Error::CoordinateOutOfRange { position, value, max: self.top() });
        }
        Ok(Point { params: self, coords: coords.into_boxed_slice() })
    }

    /// Parses the comma-separated text form, e.g. `"2,0,1"`.
    pub fn parse_point(self, text: &str) -> Result<Point> {
        let coords = text
            .trim()
            .split(',')
            .map(|part| {
                part.trim().parse::<u32>().map_err(|e| Error::Parse {
                    what: "point",
                    input: text.to_string(),
                    reason: format!("{part:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.point(coords)
    }

    /// All `k^n` points in lexicographic order.
    pub fn points(self, budget: &Budget) -> Result<CubeIter> {
        budget.check("cube enumeration", self.size())?;
        Ok(CubeIter { params: self, next: Some(vec![0; self.n as usize]) })
    }

    pub(crate) fn ensure_same(self, other: CubeParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamsMismatch { left: self, right: other })
        }
    }
}

impl fmt::Display for CubeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}, n={}", self.k, self.n)
    }
}

/// An element of `E^n`. Ordering is lexicographic on coordinates within a cube.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    params: CubeParams,
    coords: Box<[u32]>,
}

impl Point {
    pub fn params(&self) -> CubeParams {
        self.params
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// First coordinate, which selects the slice `C_i`.
    pub fn first(&self) -> u32 {
        self.coords[0]
    }

    pub fn weight(&self) -> u64 {
        self.coords.iter().map(|&c| u64::from(c)).sum()
    }

    /// Coordinatewise `k-1-a_i`.
    pub fn complement(&self) -> Point {
        let top = self.params.top();
        Point {
            params: self.params,
            coords: self.coords.iter().map(|&c| top - c).collect(),
        }
    }

    /// Dominance order: `a_i <= b_i` for every `i`.
    pub fn preceq(&self, other: &Point) -> Result<bool> {
        self.params.ensure_same(other.params)?;
        Ok(self.preceq_unchecked(other))
    }

    /// Some position has `a_i + b_i >= k`.
    pub fn intersects(&self, other: &Point) -> Result<bool> {
        self.params.ensure_same(other.params)?;
        Ok(self.intersects_unchecked(other))
    }

    /// `intersects(a, a)`: some coordinate has `2 a_i >= k`.
    pub fn is_self_intersecting(&self) -> bool {
        self.coords.iter().any(|&c| 2 * u64::from(c) >= u64::from(self.params.k))
    }

    pub(crate) fn preceq_unchecked(&self, other: &Point) -> bool {
        self.coords.iter().zip(other.coords.iter()).all(|(a, b)| a <= b)
    }

    pub(crate) fn intersects_unchecked(&self, other: &Point) -> bool {
        let k = u64::from(self.params.k);
        self.coords
            .iter()
            .zip(other.coords.iter())
            .any(|(&a, &b)| u64::from(a) + u64::from(b) >= k)
    }

    pub(crate) fn comparable_unchecked(&self, other: &Point) -> bool {
        self.preceq_unchecked(other) || other.preceq_unchecked(self)
    }

    /// Builds a point without range checks; callers guarantee validity.
    pub(crate) fn from_parts(params: CubeParams, coords: Box<[u32]>) -> Point {
        debug_assert_eq!(coords.len(), params.n as usize);
        debug_assert!(coords.iter().all(|&c| c < params.k));
        Point { params, coords }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Lexicographic odometer over `E^n`.
#[derive(Debug, Clone)]
pub struct CubeIter {
    params: CubeParams,
    next: Option<Vec<u32>>,
}

impl Iterator for CubeIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let top = self.params.top();
        let mut pos = succ.len();
        while pos > 0 {
            pos -= 1;
            if succ[pos] < top {
                succ[pos] += 1;
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(Point::from_parts(self.params, current.into_boxed_slice()))
    }
}

pub fn enumerate_cube(params: CubeParams, budget: &Budget) -> Result<CubeIter> {
    params.points(budget)
}

/// Which lower-half set is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `L_n`: slices `C_0` and `C_{k-1}` with thresholds `g` and `g'`.
    Standard,
    /// `L_{n,i}`: slices `C_i` and `C_{k-1-i}`, same thresholds.
    SliceShift(u32),
    /// `L_n^z`: slices `C_0` and `C_{k-1}`, thresholds `g+z` and `g'-z`.
    ThresholdShift(u64),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Standard => f.write_str("standard"),
            Variant::SliceShift(i) => write!(f, "slice:{i}"),
            Variant::ThresholdShift(z) => write!(f, "shift:{z}"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::Parse { what: "variant", input: s.to_string(), reason };
        let s = s.trim();
        if s == "standard" {
            return Ok(Variant::Standard);
        }
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| bad("expected standard, slice:<i> or shift:<z>".into()))?;
        match kind {
            "slice" => value.parse().map(Variant::SliceShift).map_err(|e| bad(format!("{e}"))),
            "shift" => value.parse().map(Variant::ThresholdShift).map_err(|e| bad(format!("{e}"))),
            _ => Err(bad(format!("unknown variant kind {kind:?}"))),
        }
    }
}

/// A lower-half variant bound to a cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LowerHalfSpec {
    params: CubeParams,
    variant: Variant,
}

impl LowerHalfSpec {
    pub fn new(params: CubeParams, variant: Variant) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidVariant {
            variant: variant.to_string(),
            params,
            reason,
        };
        match variant {
            Variant::Standard => {}
            Variant::SliceShift(i) => {
                if 2 * u64::from(i) >= u64::from(params.top()) {
                    return Err(invalid(format!("slice index must satisfy i < (k-1)/2 = {}/2", params.top())));
                }
            }
            Variant::ThresholdShift(z) => {
                if z > params.g_prime() {
                    return Err(invalid(format!("shift must satisfy z <= g' = {}", params.g_prime())));
                }
            }
        }
        Ok(LowerHalfSpec { params, variant })
    }

    pub fn standard(params: CubeParams) -> Self {
        LowerHalfSpec { params, variant: Variant::Standard }
    }

    /// Standard, then every valid slice shift, then every valid threshold shift.
    pub fn all(params: CubeParams) -> Vec<LowerHalfSpec> {
        let mut specs = vec![LowerHalfSpec::standard(params)];
        specs.extend(
            (0..)
                .take_while(|&i: &u32| 2 * u64::from(i) < u64::from(params.top()))
                .map(|i| LowerHalfSpec { params, variant: Variant::SliceShift(i) }),
        );
        specs.extend(
            (0..=params.g_prime()).map(|z| LowerHalfSpec { params, variant: Variant::ThresholdShift(z) }),
        );
        specs
    }

    pub fn params(&self) -> CubeParams {
        self.params
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// First entry of the points kept unchanged by the map.
    pub fn low_slice(&self) -> u32 {
        match self.variant {
            Variant::SliceShift(i) => i,
            _ => 0,
        }
    }

    /// First entry of the points whose tail gets complemented.
    pub fn high_slice(&self) -> u32 {
        self.params.top() - self.low_slice()
    }

    /// Maximum weight of a member on the low slice.
    pub fn low_bound(&self) -> u64 {
        match self.variant {
            Variant::ThresholdShift(z) => self.params.g() + z,
            _ => self.params.g(),
        }
    }

    /// Maximum weight of a member on the high slice.
    pub fn high_bound(&self) -> u64 {
        match self.variant {
            Variant::ThresholdShift(z) => self.params.g_prime() - z,
            _ => self.params.g_prime(),
        }
    }

    /// Largest tail weight `w(b)` sent back to the low slice by the inverse map.
    pub fn inverse_threshold(&self) -> u64 {
        self.low_bound() - u64::from(self.low_slice())
    }

    pub fn contains(&self, point: &Point) -> Result<bool> {
        self.params.ensure_same(point.params())?;
        Ok(self.violation(point).is_none())
    }

    /// Like [`contains`](Self::contains), but the error names the failed condition.
    pub fn check(&self, point: &Point) -> Result<()> {
        self.params.ensure_same(point.params())?;
        match self.violation(point) {
            None => Ok(()),
            Some(reason) => Err(Error::NotInLowerHalf {
                point: point.to_string(),
                variant: self.variant.to_string(),
                reason,
            }),
        }
    }

    fn violation(&self, point: &Point) -> Option<String> {
        let first = point.first();
        let weight = point.weight();
        let (low, high) = (self.low_slice(), self.high_slice());
        let bound = if first == low {
            self.low_bound()
        } else if first == high {
            self.high_bound()
        } else {
            return Some(format!("first entry {first} is not in {{{low},{high}}}"));
        };
        (weight > bound).then(|| format!("weight {weight} exceeds {bound} for first entry {first}"))
    }

    /// Every lower-half set has exactly `k^(n-1)` members.
    pub fn size(&self) -> Option<u64> {
        u64::from(self.params.k()).checked_pow(self.params.n() - 1)
    }

    pub fn points(&self, budget: &Budget) -> Result<impl Iterator<Item = Point>> {
        let spec = *self;
        Ok(self.params.points(budget)?.filter(move |p| spec.violation(p).is_none()))
    }
}

impl fmt::Display for LowerHalfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.variant, self.params)
    }
}

pub fn enumerate_lower_half(spec: &LowerHalfSpec, budget: &Budget) -> Result<impl Iterator<Item = Point>> {
    spec.points(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(k: u32, n: u32) -> CubeParams {
        CubeParams::new(k, n).unwrap()
    }

    fn pt(k: u32, coords: &[u32]) -> Point {
        cube(k, coords.len() as u32).point(coords.to_vec()).unwrap()
    }

    fn all_points(k: u32, n: u32) -> Vec<Point> {
        cube(k, n).points(&Budget::default()).unwrap().collect()
    }

    #[test]
    fn params_validation() {
        assert!(CubeParams::new(1, 3).is_err());
        assert!(CubeParams::new(2, 0).is_err());
        assert!(CubeParams::new(2, 1).is_ok());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(pt(3, &[0, 0, 0]).weight(), 0);
        assert_eq!(pt(3, &[2, 2, 2]).weight(), 6);
        assert_eq!(pt(5, &[3, 1]).weight(), 4);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(pt(3, &[0, 2, 1]).complement(), pt(3, &[2, 0, 1]));
        assert_eq!(pt(2, &[1, 0]).complement(), pt(2, &[0, 1]));
    }

    #[test]
    fn preceq_examples() {
        assert!(pt(3, &[0, 1]).preceq(&pt(3, &[1, 1])).unwrap());
        assert!(!pt(3, &[0, 2]).preceq(&pt(3, &[1, 1])).unwrap());
        let a = pt(3, &[1, 2]);
        assert!(a.preceq(&a).unwrap());
    }

    #[test]
    fn mismatched_params_are_errors() {
        let a = pt(3, &[0, 1]);
        let b = pt(4, &[0, 1]);
        let c = pt(3, &[0, 1, 1]);
        assert!(matches!(a.preceq(&b), Err(Error::ParamsMismatch { .. })));
        assert!(matches!(a.intersects(&c), Err(Error::ParamsMismatch { .. })));
        assert!(LowerHalfSpec::standard(cube(3, 3)).contains(&a).is_err());
    }

    #[test]
    fn intersects_examples() {
        assert!(pt(3, &[0, 2]).intersects(&pt(3, &[0, 1])).unwrap());
        assert!(!pt(2, &[1, 0]).intersects(&pt(2, &[0, 1])).unwrap());
        let a = pt(3, &[1, 1]);
        assert!(!a.intersects(&a).unwrap());
    }

    #[test]
    fn self_intersecting_examples() {
        assert!(pt(3, &[0, 2]).is_self_intersecting());
        assert!(!pt(3, &[1, 1]).is_self_intersecting());
        assert!(!pt(2, &[0, 0]).is_self_intersecting());
    }

    #[test]
    fn thresholds() {
        assert_eq!((cube(3, 2).g(), cube(3, 2).g_prime()), (2, 1));
        assert_eq!((cube(2, 3).g(), cube(2, 3).g_prime()), (1, 1));
        assert_eq!((cube(5, 2).g(), cube(5, 2).g_prime()), (4, 3));
        for k in 2..=10 {
            for n in 1..=10 {
                let p = cube(k, n);
                assert_eq!(p.g() + 1 + p.g_prime(), p.max_weight(), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn point_parsing() {
        let p = cube(12, 3);
        assert_eq!(p.parse_point("11,0,10").unwrap().coords(), &[11, 0, 10]);
        assert_eq!(p.parse_point("11,0,10").unwrap().to_string(), "11,0,10");
        assert!(matches!(p.parse_point("1,x,0"), Err(Error::Parse { .. })));
        assert!(matches!(p.parse_point("1,0"), Err(Error::WrongLength { .. })));
        assert!(matches!(p.parse_point("1,0,12"), Err(Error::CoordinateOutOfRange { .. })));
    }

    #[test]
    fn cube_enumeration_is_lexicographic() {
        let s: Vec<String> = all_points(2, 2).iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["0,0", "0,1", "1,0", "1,1"]);
        let s: Vec<String> = all_points(3, 1).iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["0", "1", "2"]);
        let pts = all_points(3, 4);
        assert_eq!(pts.len(), 81);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_budget_refuses() {
        let err = cube(10, 9).points(&Budget::new(1000)).unwrap_err();
        assert!(err.is_budget());
        assert!(cube(10, 30).points(&Budget::default()).unwrap_err().is_budget());
    }

    fn lower(k: u32, n: u32, v: Variant) -> Vec<String> {
        LowerHalfSpec::new(cube(k, n), v)
            .unwrap()
            .points(&Budget::default())
            .unwrap()
            .map(|p| p.to_string())
            .collect()
    }

    #[test]
    fn lower_half_examples() {
        assert_eq!(lower(3, 2, Variant::Standard), ["0,0", "0,1", "0,2"]);
        assert_eq!(lower(2, 2, Variant::Standard), ["0,0", "0,1"]);
        assert_eq!(lower(5, 2, Variant::SliceShift(1)), ["1,0", "1,1", "1,2", "1,3", "3,0"]);
        assert_eq!(lower(2, 3, Variant::Standard).len(), 4);
        assert_eq!(lower(5, 2, Variant::ThresholdShift(3)).len(), 5);
    }

    #[test]
    fn variant_validation() {
        let p = cube(5, 2);
        assert!(LowerHalfSpec::new(p, Variant::SliceShift(1)).is_ok());
        assert!(LowerHalfSpec::new(p, Variant::SliceShift(2)).is_err());
        assert!(LowerHalfSpec::new(cube(2, 3), Variant::SliceShift(1)).is_err());
        assert!(LowerHalfSpec::new(p, Variant::ThresholdShift(3)).is_ok());
        assert!(LowerHalfSpec::new(p, Variant::ThresholdShift(4)).is_err());
        let all: Vec<String> = LowerHalfSpec::all(cube(4, 3)).iter().map(|s| s.variant().to_string()).collect();
        assert_eq!(all, ["standard", "slice:0", "slice:1", "shift:0", "shift:1", "shift:2", "shift:3", "shift:4"]);
    }

    #[test]
    fn variant_text_form() {
        for v in [Variant::Standard, Variant::SliceShift(3), Variant::ThresholdShift(12)] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("slice".parse::<Variant>().is_err());
        assert!("slice:-1".parse::<Variant>().is_err());
        assert!("turn:1".parse::<Variant>().is_err());
    }

    #[test]
    fn standard_matches_zero_shifts() {
        for k in 2..=5 {
            for n in 1..=4 {
                let p = cube(k, n);
                let std = LowerHalfSpec::standard(p);
                let s0 = LowerHalfSpec::new(p, Variant::SliceShift(0)).unwrap();
                let z0 = LowerHalfSpec::new(p, Variant::ThresholdShift(0)).unwrap();
                for a in all_points(k, n) {
                    let m = std.contains(&a).unwrap();
                    assert_eq!(m, s0.contains(&a).unwrap());
                    assert_eq!(m, z0.contains(&a).unwrap());
                }
            }
        }
    }

    #[test]
    fn check_names_the_violated_condition() {
        let spec = LowerHalfSpec::standard(cube(3, 3));
        let err = spec.check(&pt(3, &[1, 1, 1])).unwrap_err().to_string();
        assert!(err.contains("first entry 1 is not in {0,2}"), "{err}");
        let err = spec.check(&pt(3, &[2, 2, 0])).unwrap_err().to_string();
        assert!(err.contains("weight 4 exceeds 2"), "{err}");
    }

    #[test]
    fn preceq_is_a_partial_order() {
        for k in 2..=3 {
            for n in 1..=3 {
                let pts = all_points(k, n);
                for a in &pts {
                    assert!(a.preceq(a).unwrap());
                    for b in &pts {
                        let ab = a.preceq(b).unwrap();
                        if ab && b.preceq(a).unwrap() {
                            assert_eq!(a, b);
                        }
                        for c in &pts {
                            if ab && b.preceq(c).unwrap() {
                                assert!(a.preceq(c).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
}
