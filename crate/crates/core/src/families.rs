//! Intersecting antichains as cliques.
//!
//! A family is an intersecting antichain iff every member is self-intersecting
//! and every pair of distinct members is incomparable and intersecting. Both
//! conditions are pairwise, so the families are exactly the cliques of the
//! compatibility graph on the self-intersecting points. The empty family is
//! always counted.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::bitset::Bitset;
use crate::budget::Budget;
use crate::cube::{CubeParams, Point};
use crate::error::{Error, Result};

/// Largest ground set the subset-enumerating oracle accepts.
pub const NAIVE_ORACLE_LIMIT: usize = 20;

/// A finite set of points from one cube.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Family {
    members: BTreeSet<Point>,
}

impl Family {
    pub fn new(members: impl IntoIterator<Item = Point>) -> Result<Self> {
        let members: BTreeSet<Point> = members.into_iter().collect();
        let mut params = members.iter().map(Point::params);
        if let Some(first) = params.next() {
            for other in params {
                first.ensure_same(other)?;
            }
        }
        Ok(Family { members })
    }

    pub fn empty() -> Self {
        Family::default()
    }

    /// Parses `"0,2;2,0"`. The empty family is written `{}` (an empty string is
    /// accepted too).
    pub fn parse(params: CubeParams, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "{}" {
            return Ok(Family::empty());
        }
        let members = text
            .split(';')
            .map(|p| params.parse_point(p))
            .collect::<Result<Vec<_>>>()?;
        Family::new(members)
    }

    pub fn members(&self) -> impl ExactSizeIterator<Item = &Point> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.members.contains(point)
    }

    /// No two distinct members are comparable.
    pub fn is_antichain(&self) -> bool {
        self.distinct_pairs().all(|(a, b)| !a.comparable_unchecked(b))
    }

    /// Every ordered pair, including a member with itself, intersects.
    pub fn is_intersecting(&self) -> bool {
        self.members.iter().all(Point::is_self_intersecting)
            && self.distinct_pairs().all(|(a, b)| a.intersects_unchecked(b))
    }

    pub fn is_intersecting_antichain(&self) -> bool {
        self.is_antichain() && self.is_intersecting()
    }

    fn distinct_pairs(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.members
            .iter()
            .enumerate()
            .flat_map(move |(i, a)| self.members.iter().skip(i + 1).map(move |b| (a, b)))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return f.write_str("{}");
        }
        for (i, p) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Sorts, deduplicates and checks that a ground set lives in one cube.
fn normalize_ground(ground: impl IntoIterator<Item = Point>) -> Result<Vec<Point>> {
    let set: BTreeSet<Point> = ground.into_iter().collect();
    let mut params = set.iter().map(Point::params);
    if let Some(first) = params.next() {
        for other in params {
            first.ensure_same(other)?;
        }
    }
    Ok(set.into_iter().collect())
}

/// Self-intersecting points of a ground set, joined when incomparable and
/// intersecting. Vertex `i` is the `i`-th such point in lexicographic order.
#[derive(Clone, Debug)]
pub struct CompatGraph {
    vertices: Vec<Point>,
    adjacency: Vec<Bitset>,
}

impl CompatGraph {
    pub fn build(ground: impl IntoIterator<Item = Point>, budget: &Budget) -> Result<Self> {
        Self::build_with(
            ground,
            budget,
            Point::is_self_intersecting,
            |a, b| a.intersects_unchecked(b) && !a.comparable_unchecked(b),
        )
    }

    /// Builds with caller-supplied vertex and edge predicates. `is_edge` is
    /// only called on distinct vertices and must be symmetric.
    pub fn build_with(
        ground: impl IntoIterator<Item = Point>,
        budget: &Budget,
        is_vertex: impl Fn(&Point) -> bool,
        is_edge: impl Fn(&Point, &Point) -> bool,
    ) -> Result<Self> {
        let ground = normalize_ground(ground)?;
        let m = ground.len() as u64;
        budget.check("compatibility graph pairs", m.checked_mul(m))?;
        let vertices: Vec<Point> = ground.into_iter().filter(|p| is_vertex(p)).collect();
        let n = vertices.len();
        let mut adjacency = vec![Bitset::empty(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if is_edge(&vertices[u], &vertices[v]) {
                    adjacency[u].insert(v);
                    adjacency[v].insert(u);
                }
            }
        }
        Ok(CompatGraph { vertices, adjacency })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bitset::len).sum::<usize>() / 2
    }

    pub fn family(&self, clique: &[usize]) -> Family {
        Family {
            members: clique.iter().map(|&v| self.vertices[v].clone()).collect(),
        }
    }

    /// Every clique once, the empty one first, in lexicographic order of the
    /// sorted vertex-index sequences.
    pub fn cliques(&self) -> Cliques<'_> {
        Cliques { graph: self, walk: CliqueWalk::default() }
    }

    /// Number of cliques, the empty one included.
    pub fn count_cliques(&self) -> BigUint {
        let n = self.len();
        let branches: Vec<BigUint> = (0..n)
            .into_par_iter()
            .map(|v| {
                let mut later = self.adjacency[v].clone();
                for u in 0..=v {
                    later.remove(u);
                }
                let mut memo = HashMap::new();
                self.count_within(&later, &mut memo)
            })
            .collect();
        branches.into_iter().fold(BigUint::one(), |acc, c| acc + c)
    }

    /// Cliques (empty included) inside `cand`, every vertex of which is
    /// adjacent to the clique built so far.
    fn count_within(&self, cand: &Bitset, memo: &mut HashMap<Bitset, BigUint>) -> BigUint {
        match cand.len() {
            0 => return BigUint::one(),
            1 => return BigUint::from(2u32),
            _ => {}
        }
        if let Some(hit) = memo.get(cand) {
            return hit.clone();
        }
        let mut total = BigUint::one();
        let mut rest = cand.clone();
        while let Some(v) = rest.pop_first() {
            let next = rest.intersection(&self.adjacency[v]);
            total += self.count_within(&next, memo);
        }
        memo.insert(cand.clone(), total.clone());
        total
    }

    /// A maximum clique; among several, the lexicographically smallest sorted
    /// index sequence.
    pub fn max_clique(&self) -> Vec<usize> {
        let mut best = Vec::new();
        let mut current = Vec::new();
        self.expand(&Bitset::full(self.len()), &mut current, &mut best);
        best
    }

    // Branches in increasing vertex order, so the search visits cliques in
    // lexicographic order and the first clique of maximum size wins.
    fn expand(&self, cand: &Bitset, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        if current.len() > best.len() {
            best.clone_from(current);
        }
        let order: Vec<usize> = cand.iter().collect();
        let bounds = self.suffix_color_bounds(&order);
        let mut rest = cand.clone();
        for (j, &v) in order.iter().enumerate() {
            if current.len() + bounds[j] <= best.len() {
                break;
            }
            rest.remove(v);
            let next = rest.intersection(&self.adjacency[v]);
            current.push(v);
            self.expand(&next, current, best);
            current.pop();
        }
    }

    /// `bounds[j]` is the number of colors a greedy coloring of `order[j..]`
    /// uses, colored from the back; it bounds any clique inside that suffix.
    fn suffix_color_bounds(&self, order: &[usize]) -> Vec<usize> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut bounds = vec![0; order.len()];
        for j in (0..order.len()).rev() {
            let v = order[j];
            let adj = &self.adjacency[v];
            match classes.iter_mut().find(|class| class.iter().all(|&u| !adj.contains(u))) {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
            bounds[j] = classes.len();
        }
        bounds
    }
}

/// Pre-order depth-first walk state, kept apart from the graph so both the
/// borrowing and the owning iterators can drive it.
#[derive(Debug, Default)]
struct CliqueWalk {
    /// `stack[d]` holds the untried extensions of the clique prefix of length `d`.
    stack: Vec<Bitset>,
    clique: Vec<usize>,
    started: bool,
}

impl CliqueWalk {
    fn advance(&mut self, graph: &CompatGraph) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            self.stack.push(Bitset::full(graph.len()));
            return Some(Vec::new());
        }
        loop {
            let top = self.stack.last_mut()?;
            match top.pop_first() {
                Some(v) => {
                    let next = top.intersection(&graph.adjacency[v]);
                    self.clique.push(v);
                    self.stack.push(next);
                    return Some(self.clique.clone());
                }
                None => {
                    self.stack.pop();
                    self.clique.pop();
                }
            }
        }
    }
}

/// Cliques of a [`CompatGraph`] as sorted vertex-index sequences.
pub struct Cliques<'g> {
    graph: &'g CompatGraph,
    walk: CliqueWalk,
}

impl Iterator for Cliques<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.walk.advance(self.graph)
    }
}

pub fn build_compat_graph(ground: impl IntoIterator<Item = Point>, budget: &Budget) -> Result<CompatGraph> {
    CompatGraph::build(ground, budget)
}

/// Streams every intersecting antichain inside a ground set.
pub struct IntersectingAntichains {
    graph: CompatGraph,
    walk: CliqueWalk,
    emitted: u64,
    limit: u64,
    failed: bool,
}

impl IntersectingAntichains {
    pub fn graph(&self) -> &CompatGraph {
        &self.graph
    }

    /// Caps the number of families emitted; defaults to the budget limit.
    pub fn with_output_limit(mut self, limit: u64) -> Self {
        self.limit = limit;
        self
    }
}

impl Iterator for IntersectingAntichains {
    type Item = Result<Family>;

    fn next(&mut self) -> Option<Result<Family>> {
        if self.failed {
            return None;
        }
        let clique = self.walk.advance(&self.graph)?;
        if self.emitted >= self.limit {
            self.failed = true;
            return Some(Err(Error::BudgetExceeded {
                what: "intersecting antichain output",
                needed: format!("more than {}", self.limit),
                limit: self.limit,
            }));
        }
        self.emitted += 1;
        Some(Ok(self.graph.family(&clique)))
    }
}

pub fn enumerate_intersecting_antichains(
    ground: impl IntoIterator<Item = Point>,
    budget: &Budget,
) -> Result<IntersectingAntichains> {
    Ok(IntersectingAntichains {
        graph: CompatGraph::build(ground, budget)?,
        walk: CliqueWalk::default(),
        emitted: 0,
        limit: budget.limit(),
        failed: false,
    })
}

pub fn count_intersecting_antichains(ground: impl IntoIterator<Item = Point>, budget: &Budget) -> Result<BigUint> {
    Ok(CompatGraph::build(ground, budget)?.count_cliques())
}

pub fn max_intersecting_antichain(ground: impl IntoIterator<Item = Point>, budget: &Budget) -> Result<Family> {
    let graph = CompatGraph::build(ground, budget)?;
    Ok(graph.family(&graph.max_clique()))
}

/// Filters all `2^|ground|` subsets through the predicates, independent of
/// the clique machinery. Output order follows the subset bitmask.
pub fn naive_oracle_enumerate(ground: impl IntoIterator<Item = Point>) -> Result<Vec<Family>> {
    let ground = normalize_ground(ground)?;
    if ground.len() > NAIVE_ORACLE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "naive subset oracle ground size",
            needed: ground.len().to_string(),
            limit: NAIVE_ORACLE_LIMIT as u64,
        });
    }
    let families = (0u32..1 << ground.len())
        .map(|mask| Family {
            members: ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        })
        .filter(Family::is_intersecting_antichain)
        .collect();
    Ok(families)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{LowerHalfSpec, Variant};

    fn cube(k: u32, n: u32) -> CubeParams {
        CubeParams::new(k, n).unwrap()
    }

    fn fam(k: u32, n: u32, text: &str) -> Family {
        Family::parse(cube(k, n), text).unwrap()
    }

    fn cube_points(k: u32, n: u32) -> Vec<Point> {
        cube(k, n).points(&Budget::default()).unwrap().collect()
    }

    fn lower_points(k: u32, n: u32) -> Vec<Point> {
        LowerHalfSpec::standard(cube(k, n)).points(&Budget::default()).unwrap().collect()
    }

    fn enumerate_text(ground: Vec<Point>) -> Vec<String> {
        enumerate_intersecting_antichains(ground, &Budget::default())
            .unwrap()
            .map(|f| f.unwrap().to_string())
            .collect()
    }

    #[test]
    fn antichain_examples() {
        assert!(fam(3, 2, "0,2;2,0").is_antichain());
        assert!(!fam(3, 2, "0,1;0,2").is_antichain());
        assert!(Family::empty().is_antichain());
    }

    #[test]
    fn intersecting_examples() {
        assert!(!fam(3, 2, "1,1").is_intersecting());
        assert!(!fam(3, 2, "0,2;2,0").is_intersecting());
        assert!(Family::empty().is_intersecting());
    }

    #[test]
    fn intersecting_antichain_examples() {
        assert!(fam(2, 2, "1,1").is_intersecting_antichain());
        assert!(!fam(2, 2, "1,0;0,1").is_intersecting_antichain());
        assert!(fam(3, 2, "1,2;2,1").is_intersecting_antichain());
        assert!(Family::empty().is_intersecting_antichain());
    }

    #[test]
    fn family_rejects_mixed_cubes() {
        let a = cube(3, 2).point(vec![0, 1]).unwrap();
        let b = cube(4, 2).point(vec![0, 1]).unwrap();
        assert!(Family::new([a, b]).is_err());
    }

    #[test]
    fn family_text_form() {
        let f = fam(3, 2, "2,0;0,2");
        assert_eq!(f.to_string(), "0,2;2,0");
        assert_eq!(Family::empty().to_string(), "{}");
        assert_eq!(fam(3, 2, "{}"), Family::empty());
        assert!(Family::parse(cube(3, 2), "0,2;;2,0").is_err());
    }

    #[test]
    fn graph_examples() {
        let g = CompatGraph::build(cube_points(3, 1), &Budget::default()).unwrap();
        assert_eq!(g.vertices().iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["2"]);
        assert_eq!(g.edge_count(), 0);

        let g = CompatGraph::build(cube_points(2, 2), &Budget::default()).unwrap();
        assert_eq!(
            g.vertices().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            ["0,1", "1,0", "1,1"]
        );
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn graph_budget_guard() {
        assert!(CompatGraph::build(cube_points(3, 3), &Budget::new(100)).unwrap_err().is_budget());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_text(cube_points(3, 1)), ["{}", "2"]);
        assert_eq!(enumerate_text(cube_points(2, 2)), ["{}", "0,1", "1,0", "1,1"]);
        assert_eq!(enumerate_text(lower_points(3, 2)), ["{}", "0,2"]);
        assert_eq!(enumerate_text(vec![]), ["{}"]);
    }

    #[test]
    fn enumeration_order_is_lexicographic_on_indices() {
        let g = CompatGraph::build(cube_points(3, 3), &Budget::default()).unwrap();
        let all: Vec<Vec<usize>> = g.cliques().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all.len() as u64, u64::try_from(g.count_cliques()).unwrap());
    }

    #[test]
    fn enumeration_output_budget() {
        let mut it = enumerate_intersecting_antichains(cube_points(3, 2), &Budget::default())
            .unwrap()
            .with_output_limit(2);
        assert!(it.next().unwrap().is_ok());
        assert!(it.next().unwrap().is_ok());
        assert!(it.next().unwrap().unwrap_err().is_budget());
        assert!(it.next().is_none());
    }

    #[test]
    fn count_examples() {
        let b = Budget::default();
        assert_eq!(count_intersecting_antichains(cube_points(3, 1), &b).unwrap(), BigUint::from(2u32));
        assert_eq!(count_intersecting_antichains(vec![], &b).unwrap(), BigUint::one());
        assert_eq!(
            count_intersecting_antichains(cube_points(2, 2), &b).unwrap(),
            count_intersecting_antichains(lower_points(2, 3), &b).unwrap()
        );
    }

    #[test]
    fn max_examples() {
        let b = Budget::default();
        assert_eq!(max_intersecting_antichain(cube_points(3, 1), &b).unwrap().to_string(), "2");
        let m = max_intersecting_antichain(cube_points(2, 2), &b).unwrap();
        assert_eq!(m.to_string(), "0,1");
        let m = max_intersecting_antichain(lower_points(2, 1), &b).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn max_matches_brute_force() {
        let b = Budget::default();
        for k in 2..=3 {
            for n in 1..=3 {
                let g = CompatGraph::build(cube_points(k, n), &b).unwrap();
                let all: Vec<Vec<usize>> = g.cliques().collect();
                let size = all.iter().map(Vec::len).max().unwrap();
                let first = all.iter().find(|c| c.len() == size).unwrap();
                assert_eq!(&g.max_clique(), first, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn naive_oracle_examples() {
        let fams = naive_oracle_enumerate(cube_points(2, 2)).unwrap();
        let text: BTreeSet<String> = fams.iter().map(|f| f.to_string()).collect();
        assert_eq!(text, ["{}", "0,1", "1,0", "1,1"].into_iter().map(String::from).collect());
        assert!(naive_oracle_enumerate(cube_points(3, 3)).unwrap_err().is_budget());
    }

    #[test]
    fn clique_enumeration_matches_oracle_small_grounds() {
        let b = Budget::default();
        let grounds = [
            cube_points(2, 2),
            cube_points(3, 2),
            cube_points(4, 2),
            cube_points(2, 3),
            cube_points(2, 4),
            lower_points(2, 3),
            lower_points(3, 3),
            LowerHalfSpec::new(cube(5, 2), Variant::SliceShift(1)).unwrap().points(&b).unwrap().collect(),
        ];
        for ground in grounds {
            let fast: BTreeSet<Family> = enumerate_intersecting_antichains(ground.clone(), &b)
                .unwrap()
                .map(Result::unwrap)
                .collect();
            let slow: BTreeSet<Family> = naive_oracle_enumerate(ground).unwrap().into_iter().collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn count_is_monotone_in_ground() {
        let b = Budget::default();
        let full = cube_points(3, 2);
        let total = count_intersecting_antichains(full.clone(), &b).unwrap();
        for skip in 0..full.len() {
            let sub: Vec<Point> = full.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p.clone()).collect();
            assert!(count_intersecting_antichains(sub, &b).unwrap() <= total);
        }
    }
}
