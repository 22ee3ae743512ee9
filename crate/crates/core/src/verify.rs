//! Exhaustive checks of the bijection's properties over parameter grids.
//!
//! Each check produces a [`VerifyReport`]. A [`Harness`] can carry a
//! [`Mutant`], a deliberately broken variant of one primitive, so the checks
//! themselves can be shown to detect real defects.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bijection;
use crate::budget::Budget;
use crate::cube::{CubeParams, LowerHalfSpec, Point, Variant};
use crate::error::{Error, Result};
use crate::families::{naive_oracle_enumerate, CompatGraph};

/// Witnesses kept per report; further failures only bump the counter.
pub const WITNESS_CAP: usize = 16;

/// Census checks also run the subset oracle when a ground set is this small.
pub const CENSUS_ORACLE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// Thresholds, complement, membership formulations, lower-half size.
    Structure,
    /// Low-slice images are strictly lighter than high-slice images.
    WeightSeparation,
    /// Injective, surjective, both round-trips, image weight formula.
    Bijection,
    /// Pairs are intersecting antichains iff their images are, both ways.
    Preservation,
    /// Equal numbers of intersecting antichains on both sides.
    Census,
}

impl Lemma {
    pub const ALL: [Lemma; 5] = [
        Lemma::Structure,
        Lemma::WeightSeparation,
        Lemma::Bijection,
        Lemma::Preservation,
        Lemma::Census,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Structure => "structure",
            Lemma::WeightSeparation => "weight-separation",
            Lemma::Bijection => "bijection",
            Lemma::Preservation => "preservation",
            Lemma::Census => "census",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| Error::Parse {
            what: "lemma",
            input: s.to_string(),
            reason: "expected structure, weight-separation, bijection, preservation or census".into(),
        })
    }
}

/// Deliberate defects used to show the checks have teeth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutant {
    /// The map forgets to complement the tail of high-slice points.
    DropComplement,
    /// Membership uses `g` instead of `g'` as the high-slice weight bound.
    GForGPrime,
    /// Every point counts as self-intersecting.
    SelfIntersectAlways,
}

impl Mutant {
    pub const ALL: [Mutant; 3] = [Mutant::DropComplement, Mutant::GForGPrime, Mutant::SelfIntersectAlways];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::DropComplement => "drop-complement",
            Mutant::GForGPrime => "g-for-g-prime",
            Mutant::SelfIntersectAlways => "self-intersect-always",
        }
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mutant::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::Parse {
            what: "mutant",
            input: s.to_string(),
            reason: "expected drop-complement, g-for-g-prime or self-intersect-always".into(),
        })
    }
}

/// Outcome of one check on one parameter cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub lemma: Lemma,
    pub k: u32,
    pub n: u32,
    /// `standard`, `slice` or `shift`.
    pub variant: &'static str,
    /// The slice index or threshold shift; absent for `standard`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant_param: Option<u64>,
    pub checked: u64,
    /// Passed only because there was nothing to check.
    pub vacuous: bool,
    pub passed: bool,
    pub failures: u64,
    /// Up to [`WITNESS_CAP`] failing cases, each a tuple of rendered points.
    pub witnesses: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
}

impl VerifyReport {
    fn new(lemma: Lemma, spec: &LowerHalfSpec, tally: Tally, started: Instant) -> Self {
        let (variant, variant_param) = match spec.variant() {
            Variant::Standard => ("standard", None),
            Variant::SliceShift(i) => ("slice", Some(u64::from(i))),
            Variant::ThresholdShift(z) => ("shift", Some(z)),
        };
        VerifyReport {
            lemma,
            k: spec.params().k(),
            n: spec.params().n(),
            variant,
            variant_param,
            checked: tally.checked,
            vacuous: tally.checked == 0,
            passed: tally.failures == 0,
            failures: tally.failures,
            witnesses: tally.witnesses,
            details: tally.details,
            wall_time_us: Some(started.elapsed().as_micros() as u64),
        }
    }

    pub fn variant_label(&self) -> String {
        match self.variant_param {
            Some(p) => format!("{}:{p}", self.variant),
            None => self.variant.to_string(),
        }
    }

    /// Single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    failures: u64,
    witnesses: Vec<Vec<String>>,
    details: BTreeMap<String, String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    fn fail(&mut self, witness: Vec<String>) {
        self.failures += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness);
        }
    }

    fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.to_string(), value.to_string());
    }
}

fn render(points: &[&Point]) -> Vec<String> {
    points.iter().map(|p| p.to_string()).collect()
}

/// Which lower-half variants a grid covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantSet {
    StandardOnly,
    All,
}

/// Parameter ranges for [`Harness::verify_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub ks: RangeInclusive<u32>,
    pub ns: RangeInclusive<u32>,
    pub variants: VariantSet,
    pub lemmas: Vec<Lemma>,
}

impl Default for Grid {
    /// `k` in 2..=5, `n` in 2..=4, every variant, every check.
    fn default() -> Self {
        Grid { ks: 2..=5, ns: 2..=4, variants: VariantSet::All, lemmas: Lemma::ALL.to_vec() }
    }
}

impl Grid {
    /// Cells in canonical order: `k`, then `n`, then variant, then check.
    pub fn cells(&self) -> Result<Vec<(Lemma, LowerHalfSpec)>> {
        let mut cells = Vec::new();
        for k in self.ks.clone() {
            for n in self.ns.clone() {
                if n < 2 {
                    return Err(Error::InvalidParams { k, n, reason: "grid dimensions must be at least 2" });
                }
                let params = CubeParams::new(k, n)?;
                let specs = match self.variants {
                    VariantSet::StandardOnly => vec![LowerHalfSpec::standard(params)],
                    VariantSet::All => LowerHalfSpec::all(params),
                };
                for spec in specs {
                    cells.extend(self.lemmas.iter().map(|&l| (l, spec)));
                }
            }
        }
        Ok(cells)
    }
}

/// Runs the checks, optionally against a mutated model.
#[derive(Debug, Clone, Copy, Default)]
pub struct Harness {
    budget: Budget,
    mutant: Option<Mutant>,
}

impl Harness {
    pub fn new(budget: Budget) -> Self {
        Harness { budget, mutant: None }
    }

    pub fn with_mutant(mut self, mutant: Option<Mutant>) -> Self {
        self.mutant = mutant;
        self
    }

    pub fn mutant(&self) -> Option<Mutant> {
        self.mutant
    }

    // Model primitives. Without a mutant these defer to the library.

    fn is_member(&self, spec: &LowerHalfSpec, a: &Point) -> bool {
        if self.mutant == Some(Mutant::GForGPrime) && a.first() == spec.high_slice() {
            let bound = spec.high_bound() + (spec.params().g() - spec.params().g_prime());
            return a.weight() <= bound;
        }
        spec.contains(a).unwrap_or(false)
    }

    fn is_self_intersecting(&self, a: &Point) -> bool {
        self.mutant == Some(Mutant::SelfIntersectAlways) || a.is_self_intersecting()
    }

    fn map(&self, spec: &LowerHalfSpec, a: &Point) -> Result<Point> {
        match self.mutant {
            None | Some(Mutant::SelfIntersectAlways) => bijection::phi(a, spec),
            Some(mutant) => {
                let target = spec.params().reduced()?;
                let tail = &a.coords()[1..];
                let coords: Vec<u32> = if a.first() == spec.low_slice() || mutant == Mutant::DropComplement {
                    tail.to_vec()
                } else {
                    tail.iter().map(|&c| target.top() - c).collect()
                };
                target.point(coords)
            }
        }
    }

    fn unmap(&self, spec: &LowerHalfSpec, b: &Point) -> Result<Point> {
        if self.mutant != Some(Mutant::DropComplement) {
            return bijection::phi_inverse(b, spec);
        }
        let params = spec.params();
        let mut coords = Vec::with_capacity(params.n() as usize);
        let first = if b.weight() <= spec.inverse_threshold() { spec.low_slice() } else { spec.high_slice() };
        coords.push(first);
        coords.extend_from_slice(b.coords());
        params.point(coords)
    }

    fn pair_is_ia(&self, a: &Point, b: &Point) -> bool {
        if a == b {
            return self.is_self_intersecting(a);
        }
        self.is_self_intersecting(a)
            && self.is_self_intersecting(b)
            && !a.preceq_unchecked(b)
            && !b.preceq_unchecked(a)
            && a.intersects_unchecked(b)
    }

    fn lower_half(&self, spec: &LowerHalfSpec) -> Result<Vec<Point>> {
        Ok(spec.params().points(&self.budget)?.filter(|a| self.is_member(spec, a)).collect())
    }

    fn graph(&self, ground: Vec<Point>) -> Result<CompatGraph> {
        CompatGraph::build_with(
            ground,
            &self.budget,
            |a| self.is_self_intersecting(a),
            |a, b| a.intersects_unchecked(b) && !a.preceq_unchecked(b) && !b.preceq_unchecked(a),
        )
    }

    fn expected_image_weight(spec: &LowerHalfSpec, a: &Point) -> u64 {
        let params = spec.params();
        let w = a.weight();
        if a.first() == spec.low_slice() {
            w - u64::from(spec.low_slice())
        } else {
            u64::from(params.top()) * u64::from(params.n() - 1) - (w - u64::from(spec.high_slice()))
        }
    }

    // Checks.

    pub fn run(&self, lemma: Lemma, spec: &LowerHalfSpec) -> Result<VerifyReport> {
        match lemma {
            Lemma::Structure => self.structure(spec),
            Lemma::WeightSeparation => self.weight_lemma(spec),
            Lemma::Bijection => self.bijection(spec),
            Lemma::Preservation => self.preservation(spec),
            Lemma::Census => self.census(spec),
        }
    }

    /// `w(phi(a)) < w(phi(b))` for every `a` on the low slice and `b` on the
    /// high slice of the lower half.
    pub fn weight_lemma(&self, spec: &LowerHalfSpec) -> Result<VerifyReport> {
        let started = Instant::now();
        spec.params().reduced()?;
        let domain = self.lower_half(spec)?;
        let mut low = Vec::new();
        let mut high = Vec::new();
        let mut tally = Tally::default();
        for a in &domain {
            match self.map(spec, a) {
                Ok(img) if a.first() == spec.low_slice() => low.push((a, img.weight())),
                Ok(img) => high.push((a, img.weight())),
                Err(e) => tally.fail(vec![a.to_string(), e.to_string()]),
            }
        }
        let pairs = (low.len() as u64).checked_mul(high.len() as u64);
        self.budget.check("weight separation pairs", pairs)?;
        for (a, wa) in &low {
            for (b, wb) in &high {
                tally.record(wa < wb, || render(&[a, b]));
            }
        }
        tally.detail("low_slice_members", low.len());
        tally.detail("high_slice_members", high.len());
        Ok(VerifyReport::new(Lemma::WeightSeparation, spec, tally, started))
    }

    /// Materializes the image of the lower half and checks injectivity,
    /// surjectivity onto `E^(n-1)`, both round-trips and the weight formula.
    pub fn bijection(&self, spec: &LowerHalfSpec) -> Result<VerifyReport> {
        let started = Instant::now();
        let target = spec.params().reduced()?;
        let domain = self.lower_half(spec)?;
        let codomain: Vec<Point> = target.points(&self.budget)?.collect();
        let mut tally = Tally::default();
        let mut preimage: BTreeMap<Point, &Point> = BTreeMap::new();
        for a in &domain {
            tally.checked += 1;
            let img = match self.map(spec, a) {
                Ok(img) => img,
                Err(e) => {
                    tally.fail(vec![a.to_string(), e.to_string()]);
                    continue;
                }
            };
            if img.weight() != Self::expected_image_weight(spec, a) {
                tally.fail(vec!["weight-formula".into(), a.to_string(), img.to_string()]);
            }
            match self.unmap(spec, &img) {
                Ok(back) if &back == a => {}
                Ok(back) => tally.fail(vec!["round-trip".into(), a.to_string(), img.to_string(), back.to_string()]),
                Err(e) => tally.fail(vec!["round-trip".into(), a.to_string(), e.to_string()]),
            }
            if let Some(prev) = preimage.insert(img.clone(), a) {
                tally.fail(vec!["collision".into(), prev.to_string(), a.to_string(), img.to_string()]);
            }
        }
        for b in &codomain {
            if !preimage.contains_key(b) {
                tally.fail(vec!["not-hit".into(), b.to_string()]);
            }
            match self.unmap(spec, b) {
                Ok(a) if !self.is_member(spec, &a) => {
                    tally.fail(vec!["inverse-outside-domain".into(), b.to_string(), a.to_string()])
                }
                Ok(a) => match self.map(spec, &a) {
                    Ok(again) if &again == b => {}
                    Ok(again) => tally.fail(vec!["round-trip".into(), b.to_string(), a.to_string(), again.to_string()]),
                    Err(e) => tally.fail(vec!["round-trip".into(), b.to_string(), e.to_string()]),
                },
                Err(e) => tally.fail(vec!["inverse".into(), b.to_string(), e.to_string()]),
            }
        }
        let expected = codomain.len();
        if domain.len() != expected {
            tally.fail(vec!["domain-size".into(), domain.len().to_string(), expected.to_string()]);
        }
        tally.detail("domain_size", domain.len());
        tally.detail("image_size", preimage.len());
        tally.detail("codomain_size", expected);
        Ok(VerifyReport::new(Lemma::Bijection, spec, tally, started))
    }

    /// Every unordered pair `{a, b}` (with `a = b`) of the lower half is an
    /// intersecting antichain iff its image is; then the same from `E^(n-1)`
    /// through the inverse.
    pub fn preservation(&self, spec: &LowerHalfSpec) -> Result<VerifyReport> {
        let started = Instant::now();
        let target = spec.params().reduced()?;
        let domain = self.lower_half(spec)?;
        let codomain: Vec<Point> = target.points(&self.budget)?.collect();
        let pair_count = |m: usize| (m as u64).checked_mul(m as u64 + 1).map(|x| x / 2);
        self.budget.check("preservation pairs", pair_count(domain.len().max(codomain.len())))?;

        let mut tally = Tally::default();
        let images = self.map_all(&domain, |a| self.map(spec, a), &mut tally);
        for i in 0..images.len() {
            for j in i..images.len() {
                let ((a, fa), (b, fb)) = (&images[i], &images[j]);
                let ok = self.pair_is_ia(a, b) == self.pair_is_ia(fa, fb);
                tally.record(ok, || render(&[a, b, fa, fb]));
            }
        }
        let forward = tally.checked;

        let preimages = self.map_all(&codomain, |b| self.unmap(spec, b), &mut tally);
        for i in 0..preimages.len() {
            for j in i..preimages.len() {
                let ((a, ga), (b, gb)) = (&preimages[i], &preimages[j]);
                let ok = self.pair_is_ia(a, b) == self.pair_is_ia(ga, gb);
                if !ok {
                    tally.fail(render(&[a, b, ga, gb]));
                }
            }
        }
        tally.detail("mirrored_pairs", pair_count(preimages.len()).unwrap_or(0));
        tally.checked = forward;
        Ok(VerifyReport::new(Lemma::Preservation, spec, tally, started))
    }

    fn map_all<'p>(
        &self,
        points: &'p [Point],
        f: impl Fn(&Point) -> Result<Point>,
        tally: &mut Tally,
    ) -> Vec<(&'p Point, Point)> {
        points
            .iter()
            .filter_map(|p| match f(p) {
                Ok(img) => Some((p, img)),
                Err(e) => {
                    tally.fail(vec![p.to_string(), e.to_string()]);
                    None
                }
            })
            .collect()
    }

    /// Counts intersecting antichains in the lower half and in `E^(n-1)`.
    /// Small ground sets are also counted by the subset oracle.
    pub fn census(&self, spec: &LowerHalfSpec) -> Result<VerifyReport> {
        let started = Instant::now();
        let target = spec.params().reduced()?;
        let lower = self.lower_half(spec)?;
        let cube: Vec<Point> = target.points(&self.budget)?.collect();
        let mut tally = Tally::default();

        let lower_count = self.graph(lower.clone())?.count_cliques();
        let cube_count = self.graph(cube.clone())?.count_cliques();
        tally.record(lower_count == cube_count, || {
            vec!["count-mismatch".into(), lower_count.to_string(), cube_count.to_string()]
        });
        tally.detail("lower_count", &lower_count);
        tally.detail("cube_count", &cube_count);

        for (side, ground, count) in [("lower", lower, &lower_count), ("cube", cube, &cube_count)] {
            if ground.len() <= CENSUS_ORACLE_LIMIT {
                let oracle = naive_oracle_enumerate(ground)?.len();
                tally.record(count == &oracle.into(), || {
                    vec![format!("oracle-mismatch-{side}"), count.to_string(), oracle.to_string()]
                });
                tally.detail(&format!("oracle_{side}_count"), oracle);
            }
        }
        Ok(VerifyReport::new(Lemma::Census, spec, tally, started))
    }

    /// Threshold identity, complement involution, symmetry of the
    /// intersecting relation, agreement of the operational membership test
    /// with the layer-union descriptions, and the size of the lower half.
    pub fn structure(&self, spec: &LowerHalfSpec) -> Result<VerifyReport> {
        let started = Instant::now();
        let params = spec.params();
        let points: Vec<Point> = params.points(&self.budget)?.collect();
        self.budget.check("structure pairs", (points.len() as u64).checked_mul(points.len() as u64))?;
        let mut tally = Tally::default();

        tally.record(params.g() + 1 + params.g_prime() == params.max_weight(), || {
            vec!["g+1+g'".into(), params.g().to_string(), params.g_prime().to_string()]
        });

        let displays = layer_union_displays(spec, &points);
        let mut members = 0u64;
        for a in &points {
            let c = a.complement();
            tally.record(c.complement() == *a && c.weight() == params.max_weight() - a.weight(), || {
                vec!["complement".into(), a.to_string()]
            });
            tally.record(self.is_self_intersecting(a) == a.intersects_unchecked(a), || {
                vec!["self-intersecting".into(), a.to_string()]
            });
            let member = self.is_member(spec, a);
            members += u64::from(member);
            for (name, set) in &displays {
                tally.record(set.contains(a) == member, || vec![format!("membership-{name}"), a.to_string()]);
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                tally.record(a.intersects_unchecked(b) == b.intersects_unchecked(a), || {
                    vec!["symmetry".into(), a.to_string(), b.to_string()]
                });
            }
        }
        let expected = spec.size().unwrap_or(u64::MAX);
        tally.record(members == expected, || vec!["lower-half-size".into(), members.to_string(), expected.to_string()]);
        tally.detail("lower_half_size", members);
        Ok(VerifyReport::new(Lemma::Structure, spec, tally, started))
    }

    /// Runs every grid cell, possibly in parallel; results keep grid order.
    pub fn verify_all(&self, grid: &Grid) -> Result<Vec<Result<VerifyReport>>> {
        let cells = grid.cells()?;
        Ok(cells.par_iter().map(|(lemma, spec)| self.run(*lemma, spec)).collect())
    }
}

/// The lower half built literally as unions of weight layers intersected with
/// first-coordinate slices. Two descriptions per variant: one phrased with
/// `g` and a parity split, one with `g'`.
fn layer_union_displays(spec: &LowerHalfSpec, points: &[Point]) -> Vec<(&'static str, BTreeSet<Point>)> {
    let params = spec.params();
    let mut layers: Vec<Vec<&Point>> = vec![Vec::new(); params.max_weight() as usize + 1];
    for p in points {
        layers[p.weight() as usize].push(p);
    }
    let slice = |i: u32| -> BTreeSet<&Point> { points.iter().filter(|p| p.first() == i).collect() };
    let up_to = |t: i64| -> BTreeSet<&Point> {
        layers.iter().take((t + 1).max(0) as usize).flatten().copied().collect()
    };
    let layer = |t: u64| -> BTreeSet<&Point> { layers.get(t as usize).into_iter().flatten().copied().collect() };
    let owned = |s: BTreeSet<&Point>| -> BTreeSet<Point> { s.into_iter().cloned().collect() };

    let g = params.g() as i64;
    let gp = params.g_prime() as i64;
    let odd = params.max_weight() % 2 == 1;
    let (lo, hi) = (slice(spec.low_slice()), slice(spec.high_slice()));
    let both: BTreeSet<&Point> = lo.union(&hi).copied().collect();

    match spec.variant() {
        Variant::Standard | Variant::SliceShift(_) => {
            let by_g = if odd {
                up_to(g).intersection(&both).copied().collect()
            } else {
                let mut s: BTreeSet<&Point> = up_to(g - 1).intersection(&both).copied().collect();
                s.extend(layer(g as u64).intersection(&lo).copied());
                s
            };
            let by_g_prime = if odd {
                up_to(gp).intersection(&both).copied().collect()
            } else {
                let mut s: BTreeSet<&Point> = up_to(gp).intersection(&both).copied().collect();
                s.extend(layer(gp as u64 + 1).intersection(&lo).copied());
                s
            };
            vec![("layers-g", owned(by_g)), ("layers-g-prime", owned(by_g_prime))]
        }
        Variant::ThresholdShift(z) => {
            let z = z as i64;
            let mut shifted: BTreeSet<&Point> = up_to(g + z).intersection(&lo).copied().collect();
            shifted.extend(up_to(gp - z).intersection(&hi).copied());
            vec![("layers-shifted", owned(shifted))]
        }
    }
}
