//! Hardness of tournament 2-colorability: the seven-vertex gadget, the
//! reduction from triangle-free cuts, and the lift from `k - 1` to `k`
//! colors.

mod graph;

use crate::budget::{Budget, Outcome};
use crate::colorability::{nae, nae_two_coloring_with, Coloring};
use crate::digraph::{Digraph, Tournament};
use crate::error::{Error, Result};

pub use graph::{graphs_up_to_isomorphism, Graph};

/// Gadget vertex names in index order.
pub const GADGET_NAMES: [&str; 7] = ["u", "v", "w", "a", "b", "c", "d"];

const U: usize = 0;
const V: usize = 1;
const W: usize = 2;
const A: usize = 3;
const B: usize = 4;
const C: usize = 5;
const D: usize = 6;

/// Every pair of gadget vertices, oriented.
pub const GADGET_EDGES: [(usize, usize); 21] = [
    (U, V),
    (U, W),
    (W, V),
    (U, D),
    (U, C),
    (V, D),
    (V, C),
    (B, U),
    (A, U),
    (B, V),
    (A, V),
    (C, D),
    (A, B),
    (D, B),
    (D, A),
    (C, A),
    (C, B),
    (W, C),
    (D, W),
    (W, A),
    (B, W),
];

/// The seven-vertex gadget on `u, v, w, a, b, c, d`.
pub fn gadget() -> Tournament {
    let mut t = Tournament::transitive(7);
    for &(x, y) in &GADGET_EDGES {
        t.orient(x, y);
    }
    t
}

/// Outcome of the exhaustive sweep over the gadget's 2-colorings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    pub colorings: usize,
    pub proper: usize,
    /// Proper colorings with `u, v` one color and `N^-(u) ∪ N^+(v)` the other.
    pub item1_witnesses: usize,
    /// Whether `{u, v, w} / {a, b, c, d}` is proper.
    pub standard_split_proper: bool,
}

fn is_proper_mask(triangles: &[[usize; 3]], mask: u32) -> bool {
    triangles.iter().all(|t| {
        let c = t.map(|v| mask >> v & 1);
        !(c[0] == c[1] && c[1] == c[2])
    })
}

fn mask_name(mask: u32) -> String {
    let (mut zero, mut one) = (Vec::new(), Vec::new());
    for (v, name) in GADGET_NAMES.iter().enumerate() {
        if mask >> v & 1 == 1 {
            one.push(*name);
        } else {
            zero.push(*name);
        }
    }
    format!("{{{}}} / {{{}}}", zero.join(","), one.join(","))
}

/// Sweeps all 128 vertex 2-colorings of the gadget. Fails if a proper
/// coloring separates `u` from `v` or if no coloring has the form needed
/// for the reduction.
pub fn verify_gadget() -> Result<GadgetReport> {
    let t = gadget();
    let triangles = t.cyclic_triangles();
    let in_u: Vec<usize> = (0..7).filter(|&x| t.beats(x, U)).collect();
    let out_v: Vec<usize> = (0..7).filter(|&x| t.beats(V, x)).collect();
    let mut report = GadgetReport {
        colorings: 128,
        proper: 0,
        item1_witnesses: 0,
        standard_split_proper: false,
    };
    for mask in 0u32..128 {
        if !is_proper_mask(&triangles, mask) {
            continue;
        }
        report.proper += 1;
        let cu = mask >> U & 1;
        if cu != mask >> V & 1 {
            return Err(Error::Invariant(format!(
                "proper coloring {} separates u and v",
                mask_name(mask)
            )));
        }
        if in_u.iter().chain(&out_v).all(|&x| mask >> x & 1 != cu) {
            report.item1_witnesses += 1;
        }
    }
    let standard = (1 << A) | (1 << B) | (1 << C) | (1 << D);
    report.standard_split_proper = is_proper_mask(&triangles, standard);
    if !report.standard_split_proper {
        return Err(Error::Invariant(format!("{} is not proper", mask_name(standard))));
    }
    if report.item1_witnesses == 0 {
        return Err(Error::Invariant("no proper coloring isolates u and v from their gadget neighbourhoods".into()));
    }
    Ok(report)
}

/// Role of a vertex of the reduction tournament. Indices are 0-based:
/// `ell` is a vertex of `G`, `t` a triangle index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Y { ell: usize },
    Z { t: usize, ell: usize },
    /// Gadget vertex `gadget` (one of `w, a, b, c, d`) of the copy attached to
    /// `y_ell` and `z_t^ell`.
    K { t: usize, ell: usize, gadget: usize },
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Role::Y { ell } => write!(f, "y{}", ell + 1),
            Role::Z { t, ell } => write!(f, "z{}.{}", t + 1, ell + 1),
            Role::K { t, ell, gadget } => write!(f, "k{}.{}.{}", t + 1, ell + 1, GADGET_NAMES[gadget]),
        }
    }
}

/// Tournament `T(G)` with the role of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub tournament: Tournament,
    pub roles: Vec<Role>,
    /// Triangles of `G` in lexicographic order.
    pub triangles: Vec<[usize; 3]>,
}

impl ReductionOutput {
    pub fn y(&self, ell: usize) -> usize {
        ell
    }

    pub fn z(&self, t: usize, pos: usize) -> usize {
        self.y_len() + 3 * t + pos
    }

    /// `gadget` in `2..7` (`w..d`).
    pub fn k(&self, t: usize, pos: usize, gadget: usize) -> usize {
        self.y_len() + 3 * self.triangles.len() + 15 * t + 5 * pos + gadget - 2
    }

    fn y_len(&self) -> usize {
        self.tournament.order() - 18 * self.triangles.len()
    }
}

/// Builds `T(G)`: vertices `Y` (one per vertex of `G`), then a cyclic
/// triangle `Z_t` per triangle of `G`, then five gadget vertices per
/// (triangle, corner). Pairs not fixed by a gadget copy point forward in
/// that layout, except `K -> Z` and the back edge inside each `Z_t`.
pub fn reduce(g: &Graph) -> ReductionOutput {
    let n = g.order();
    let triangles = g.triangles();
    let m = triangles.len();
    let mut roles: Vec<Role> = (0..n).map(|ell| Role::Y { ell }).collect();
    for (t, tri) in triangles.iter().enumerate() {
        roles.extend(tri.iter().map(|&ell| Role::Z { t, ell }));
    }
    for (t, tri) in triangles.iter().enumerate() {
        for &ell in tri {
            roles.extend((W..=D).map(|gadget| Role::K { t, ell, gadget }));
        }
    }
    let total = n + 18 * m;
    let mut tour = Tournament::transitive(total);
    for kv in n + 3 * m..total {
        for zv in n..n + 3 * m {
            tour.orient(kv, zv);
        }
    }
    for t in 0..m {
        let z = |pos: usize| n + 3 * t + pos;
        // z^i -> z^j -> z^k -> z^i
        tour.orient(z(2), z(0));
        for pos in 0..3 {
            let ell = triangles[t][pos];
            let copy = |x: usize| match x {
                U => ell,
                V => z(pos),
                _ => n + 3 * m + 15 * t + 5 * pos + x - W,
            };
            for &(x, y) in &GADGET_EDGES {
                tour.orient(copy(x), copy(y));
            }
        }
    }
    ReductionOutput {
        tournament: tour,
        roles,
        triangles,
    }
}

/// Checks every structural rule of `T(G)` by scanning all pairs against the
/// roles.
pub fn audit_reduction(g: &Graph, out: &ReductionOutput) -> Result<()> {
    let n = g.order();
    let m = out.triangles.len();
    if out.triangles != g.triangles() {
        return Err(Error::Invariant("triangle list differs from the graph's".into()));
    }
    let t = &out.tournament;
    if t.order() != n + 18 * m || out.roles.len() != t.order() {
        return Err(Error::Invariant(format!("expected {} vertices", n + 18 * m)));
    }
    let pos_of = |tri: usize, ell: usize| out.triangles[tri].iter().position(|&x| x == ell).expect("corner of triangle");
    // the gadget slot a vertex fills in copy (t, ell), if any
    let slot = |r: Role, tri: usize, ell: usize| -> Option<usize> {
        match r {
            Role::Y { ell: e } if e == ell => Some(U),
            Role::Z { t, ell: e } if t == tri && e == ell => Some(V),
            Role::K { t, ell: e, gadget } if t == tri && e == ell => Some(gadget),
            _ => None,
        }
    };
    let gad = gadget();
    for p in 0..t.order() {
        for q in 0..t.order() {
            if p == q || !t.beats(p, q) {
                continue;
            }
            let (rp, rq) = (out.roles[p], out.roles[q]);
            let ok = match (rp, rq) {
                (Role::Y { ell: a }, Role::Y { ell: b }) => a < b,
                (Role::Y { .. }, Role::Z { .. }) => true,
                (Role::Z { .. }, Role::Y { .. }) => false,
                (Role::Z { t: s, ell: a }, Role::Z { t: u, ell: b }) => {
                    if s != u {
                        s < u
                    } else {
                        (pos_of(s, a) + 1) % 3 == pos_of(s, b)
                    }
                }
                (Role::K { t: s, ell: a, gadget: x }, Role::K { t: u, ell: b, gadget: y }) => {
                    if s != u {
                        s < u
                    } else if a != b {
                        pos_of(s, a) < pos_of(s, b)
                    } else {
                        gad.beats(x, y)
                    }
                }
                (_, Role::K { t: tri, ell, gadget: y }) | (Role::K { t: tri, ell, gadget: y }, _) => {
                    let other = if matches!(rp, Role::K { .. }) { rq } else { rp };
                    let k_first = matches!(rp, Role::K { .. });
                    match slot(other, tri, ell) {
                        Some(x) => {
                            if k_first {
                                gad.beats(y, x)
                            } else {
                                gad.beats(x, y)
                            }
                        }
                        // default orientation Y -> K -> Z
                        None => match other {
                            Role::Y { .. } => !k_first,
                            _ => k_first,
                        },
                    }
                }
            };
            if !ok {
                return Err(Error::Invariant(format!("edge {rp} -> {rq} breaks the construction")));
            }
        }
    }
    Ok(())
}

fn triangle_triples(g: &Graph) -> Vec<[usize; 3]> {
    g.triangles()
}

/// 2-coloring of `G` with no monochromatic triangle, via the NAE solver
/// over the triangles of `G`.
pub fn has_triangle_free_cut(g: &Graph, budget: &mut Budget) -> Outcome<Vec<bool>> {
    nae::solve_nae(g.order(), &triangle_triples(g), budget).expect("triangle vertices are in range")
}

/// Exhaustive search over all `2^n` colorings, `n <= 24`.
pub fn triangle_free_cut_exhaustive(g: &Graph) -> Result<Option<Vec<bool>>> {
    let n = g.order();
    if n > 24 {
        return Err(Error::arg("exhaustive cut search is limited to 24 vertices"));
    }
    let tri = g.triangles();
    Ok((0u32..1 << n)
        .find(|&mask| tri.iter().all(|t| {
            let c = t.map(|v| mask >> v & 1);
            !(c[0] == c[1] && c[1] == c[2])
        }))
        .map(|mask| (0..n).map(|v| mask >> v & 1 == 1).collect()))
}

pub fn is_triangle_free_cut(g: &Graph, cut: &[bool]) -> bool {
    cut.len() == g.order() && nae::satisfies(cut, &g.triangles())
}

/// Both sides of the reduction for one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionVerdict {
    pub vertices: usize,
    pub triangles: usize,
    pub cut: Option<Vec<bool>>,
    pub coloring: Option<Coloring>,
    /// Cut read off the `Y` vertices of the tournament coloring.
    pub lifted_cut: Option<Vec<bool>>,
}

impl ReductionVerdict {
    /// Both sides agree and any lifted cut is valid.
    pub fn agrees(&self, g: &Graph) -> bool {
        self.cut.is_some() == self.coloring.is_some()
            && self.lifted_cut.as_ref().is_none_or(|c| is_triangle_free_cut(g, c))
    }
}

/// Decides both sides, lifts a tournament coloring back to `G` and
/// validates everything. Budget exhaustion on either side is an error.
pub fn check_reduction(g: &Graph, budget: &mut Budget) -> Result<ReductionVerdict> {
    let out = reduce(g);
    let cut = match has_triangle_free_cut(g, budget) {
        Outcome::Found(c) => Some(c),
        Outcome::Infeasible => None,
        Outcome::Exhausted { .. } => return Err(budget.error("triangle-free cut")),
    };
    let coloring = match nae_two_coloring_with(&out.tournament, budget) {
        Outcome::Found(c) => Some(c),
        Outcome::Infeasible => None,
        Outcome::Exhausted { .. } => return Err(budget.error("tournament 2-coloring")),
    };
    if let Some(c) = &coloring {
        if !c.is_proper(out.tournament.as_oriented()) {
            return Err(Error::Invariant("solver returned an improper coloring".into()));
        }
    }
    if let Some(c) = &cut {
        if !is_triangle_free_cut(g, c) {
            return Err(Error::Invariant("solver returned an invalid cut".into()));
        }
    }
    let lifted_cut = coloring
        .as_ref()
        .map(|c| (0..g.order()).map(|ell| c.color(out.y(ell)) == 1).collect());
    Ok(ReductionVerdict {
        vertices: out.tournament.order(),
        triangles: out.triangles.len(),
        cut,
        coloring,
        lifted_cut,
    })
}

/// Extends a triangle-free cut of `G` to a proper 2-coloring of `T(G)`:
/// `z_t^ell` takes the color of `y_ell`, gadget vertices the other color
/// except `w`.
pub fn extend_cut(out: &ReductionOutput, cut: &[bool]) -> Coloring {
    let colors = out
        .roles
        .iter()
        .map(|r| match *r {
            Role::Y { ell } | Role::Z { ell, .. } => cut[ell] as usize,
            Role::K { ell, gadget, .. } => (cut[ell] != (gadget != W)) as usize,
        })
        .collect();
    Coloring::new(colors)
}

/// Two copies `T_1, T_2` of `t` and a vertex `z` with
/// `T_1 -> T_2 -> z -> T_1`. Vertex `x` of `t` becomes `x` and `n + x`;
/// `z` is `2n`. `t` is `(k-1)`-colorable iff the result is `k`-colorable.
pub fn lift(t: &Tournament, k: usize) -> Result<Tournament> {
    if k < 2 {
        return Err(Error::arg(format!("lift needs k >= 2, got {k}")));
    }
    let n = t.order();
    Ok(Tournament::from_fn(2 * n + 1, |p, q| {
        match (p < n, q < n) {
            (true, true) => t.beats(p, q),
            (true, false) => q < 2 * n,
            (false, false) if q < 2 * n => t.beats(p - n, q - n),
            _ => true,
        }
    }))
}

/// Proper `k`-coloring of `lift(t, k)` from a proper `(k-1)`-coloring of `t`.
pub fn lift_coloring(c: &Coloring, k: usize) -> Coloring {
    let mut colors = c.colors().to_vec();
    colors.extend_from_slice(c.colors());
    colors.push(k - 1);
    Coloring::new(colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorability::{acyclic_k_coloring, smallest_non_two_colorable};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Oracle: 2-colorability by sweeping all colorings for cyclic triangles.
    fn brute_two_colorable(t: &Tournament) -> bool {
        let tri = t.cyclic_triangles();
        (0u64..1 << t.order()).any(|mask| {
            tri.iter().all(|x| {
                let c = x.map(|v| mask >> v & 1);
                !(c[0] == c[1] && c[1] == c[2])
            })
        })
    }

    #[test]
    fn gadget_is_a_tournament_with_the_stated_triangles() {
        let g = gadget();
        assert_eq!(g.as_oriented().edge_count(), 21);
        for &(x, y) in &GADGET_EDGES {
            assert!(g.beats(x, y));
        }
        let cyclic = |x: usize, y: usize, z: usize| !g.is_transitive_on(&[x, y, z]);
        assert!(cyclic(A, B, W) && cyclic(C, D, W) && cyclic(U, A, C));
        assert!(g.beats(A, U) && g.beats(B, U) && g.beats(V, C) && g.beats(V, D));
        let split = Coloring::new(vec![0, 0, 0, 1, 1, 1, 1]);
        assert!(split.is_proper(g.as_oriented()));
    }

    #[test]
    fn gadget_sweep() {
        let r = verify_gadget().unwrap();
        assert_eq!(r.colorings, 128);
        assert!(r.standard_split_proper);
        assert!(r.item1_witnesses >= 1);
        // oracle: recount with the generic coloring check
        let g = gadget();
        let proper = (0u32..128)
            .filter(|m| Coloring::new((0..7).map(|v| (m >> v & 1) as usize).collect()).is_proper(g.as_oriented()))
            .count();
        assert_eq!(r.proper, proper);
    }

    #[test]
    fn single_triangle_reduction() {
        let g = Graph::complete(3);
        let out = reduce(&g);
        assert_eq!(out.tournament.order(), 21);
        audit_reduction(&g, &out).unwrap();
        let v = check_reduction(&g, &mut Budget::unlimited()).unwrap();
        assert!(v.cut.is_some() && v.coloring.is_some() && v.agrees(&g));
    }

    #[test]
    fn triangle_free_graph_gives_transitive_tournament() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let out = reduce(&g);
        assert!(out.tournament.is_transitive());
        assert_eq!(out.tournament.order(), 4);
    }

    #[test]
    fn k4_and_k5() {
        let k4 = Graph::complete(4);
        let out = reduce(&k4);
        assert_eq!(out.tournament.order(), 76);
        audit_reduction(&k4, &out).unwrap();
        let cut = has_triangle_free_cut(&k4, &mut Budget::unlimited()).found().unwrap();
        assert!(is_triangle_free_cut(&k4, &cut));
        let ext = extend_cut(&out, &cut);
        assert!(ext.is_proper(out.tournament.as_oriented()));

        let k5 = Graph::complete(5);
        assert!(triangle_free_cut_exhaustive(&k5).unwrap().is_none());
        let v = check_reduction(&k5, &mut Budget::unlimited()).unwrap();
        assert!(v.cut.is_none() && v.coloring.is_none());
    }

    #[test]
    fn audit_catches_a_flipped_edge() {
        let g = Graph::complete(3);
        let mut out = reduce(&g);
        out.tournament.flip(0, 1);
        assert!(audit_reduction(&g, &out).is_err());
    }

    #[test]
    fn nae_cut_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let g = Graph::random(8, 0.6, &mut rng);
            let fast = has_triangle_free_cut(&g, &mut Budget::unlimited());
            assert_eq!(fast.is_found(), triangle_free_cut_exhaustive(&g).unwrap().is_some());
        }
    }

    #[test]
    fn small_reductions_agree_with_brute_force_colorability() {
        for n in 3..=4 {
            for g in graphs_up_to_isomorphism(n).unwrap() {
                let out = reduce(&g);
                if out.tournament.order() > 22 {
                    continue;
                }
                let v = check_reduction(&g, &mut Budget::unlimited()).unwrap();
                assert_eq!(v.coloring.is_some(), brute_two_colorable(&out.tournament));
            }
        }
    }

    #[test]
    fn lift_examples() {
        let single = Tournament::transitive(1);
        let l = lift(&single, 2).unwrap();
        assert_eq!(l.order(), 3);
        assert!(!l.is_transitive());

        let c3 = Tournament::cyclic_triangle();
        let l = lift(&c3, 3).unwrap();
        assert_eq!(l.order(), 7);
        assert!(acyclic_k_coloring(l.as_oriented(), 3).is_some());
        let c = acyclic_k_coloring(c3.as_oriented(), 2).unwrap();
        assert!(lift_coloring(&c, 3).is_proper(l.as_oriented()));

        let hard = smallest_non_two_colorable();
        let l = lift(hard, 3).unwrap();
        assert!(acyclic_k_coloring(l.as_oriented(), 3).is_none());
        assert!(lift(&c3, 1).is_err());
    }
}
