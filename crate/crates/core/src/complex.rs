//! Finite abstract simplicial complexes.
//!
//! Each open simplex is one stratum. Simplices are stored as sorted vertex
//! lists so set semantics are unambiguous. Refinement of stratifications is
//! realized by barycentric subdivision.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{parity_i, q, Q};

/// A nonempty set of vertex ids, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Simplex(Vec<i64>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut v: Vec<i64> = vertices.into_iter().collect();
        let n = v.len();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() || v.len() != n {
            return Err(Error::MalformedSimplex(format!("{v:?}")));
        }
        Ok(Simplex(v))
    }

    pub fn vertex(v: i64) -> Self {
        Simplex(vec![v])
    }

    /// Build from vertices that are already known to be distinct.
    pub(crate) fn from_distinct(mut v: Vec<i64>) -> Self {
        v.sort_unstable();
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: i64) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains_vertex(*v))
    }

    /// The join `self * other` of two disjoint simplices.
    pub fn join(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Simplex::from_distinct(v)
    }

    pub fn with_vertex(&self, w: i64) -> Simplex {
        let mut v = self.0.clone();
        v.push(w);
        Simplex::from_distinct(v)
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }

    /// Faces of codimension one.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| *v)
                        .collect(),
                )
            })
            .collect()
    }
}

impl TryFrom<Vec<i64>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<i64> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A finite abstract simplicial complex. Face-closed by construction.
#[derive(Clone, Default)]
pub struct SimplicialComplex {
    vertices: BTreeSet<i64>,
    simplices: BTreeSet<Simplex>,
    cofaces: OnceLock<BTreeMap<Simplex, Vec<Simplex>>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("simplices", &self.simplices)
            .finish()
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Complete a list of (typically maximal) simplices to its face closure.
    pub fn from_maximal<I, S>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = i64>,
    {
        let mut all = BTreeSet::new();
        for s in simplices {
            let s = Simplex::new(s)?;
            all.extend(s.faces());
        }
        Ok(Self::from_closed_set(all))
    }

    /// Complete `simplices` to its face closure, requiring every vertex used
    /// to be declared in `vertices`. Declared vertices that appear in no
    /// simplex become isolated points.
    pub fn with_vertices(vertices: &[i64], simplices: &[Vec<i64>]) -> Result<Self> {
        let declared: BTreeSet<i64> = vertices.iter().copied().collect();
        let mut all: BTreeSet<Simplex> = declared.iter().map(|v| Simplex::vertex(*v)).collect();
        for s in simplices {
            let s = Simplex::new(s.iter().copied())?;
            if let Some(v) = s.vertices().iter().find(|v| !declared.contains(v)) {
                return Err(Error::NotFaceClosed {
                    missing: Simplex::vertex(*v),
                    simplex: s,
                });
            }
            all.extend(s.faces());
        }
        Ok(Self::from_closed_set(all))
    }

    /// Build from an explicit simplex list that must already be face-closed.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let all: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &all {
            for f in s.facets() {
                if !all.contains(&f) {
                    return Err(Error::NotFaceClosed {
                        simplex: s.clone(),
                        missing: f,
                    });
                }
            }
        }
        Ok(Self::from_closed_set(all))
    }

    fn from_closed_set(simplices: BTreeSet<Simplex>) -> Self {
        let vertices = simplices
            .iter()
            .filter(|s| s.dim() == 0)
            .map(|s| s.vertices()[0])
            .collect();
        SimplicialComplex {
            vertices,
            simplices,
            cofaces: OnceLock::new(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<i64> {
        &self.vertices
    }

    pub fn simplices(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Maximal simplex dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .filter(|s| self.cofaces(s).len() == 1)
            .cloned()
            .collect()
    }

    /// Counts of simplices per dimension, index = dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    fn coface_index(&self) -> &BTreeMap<Simplex, Vec<Simplex>> {
        self.cofaces.get_or_init(|| {
            let mut idx: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
            for s in &self.simplices {
                for f in s.faces() {
                    idx.entry(f).or_default().push(s.clone());
                }
            }
            idx
        })
    }

    /// All cofaces of `s` in the complex, `s` included. Empty if `s` is absent.
    pub fn cofaces(&self, s: &Simplex) -> &[Simplex] {
        self.coface_index().get(s).map_or(&[], Vec::as_slice)
    }

    fn require(&self, s: &Simplex) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::SimplexNotInComplex(s.clone()))
        }
    }

    /// Vertices `w` outside `s` with `s ∪ {w}` in the complex, ascending.
    pub fn link_vertices(&self, s: &Simplex) -> Vec<i64> {
        self.cofaces(s)
            .iter()
            .filter(|c| c.dim() == s.dim() + 1)
            .map(|c| {
                *c.vertices()
                    .iter()
                    .find(|v| !s.contains_vertex(**v))
                    .expect("coface has an extra vertex")
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Simplices of the link of `s`, i.e. `τ` disjoint from `s` with `τ ∪ s` present.
    pub fn link_simplices(&self, s: &Simplex) -> Vec<Simplex> {
        self.cofaces(s)
            .iter()
            .filter(|c| c.dim() > s.dim())
            .map(|c| {
                Simplex::from_distinct(
                    c.vertices()
                        .iter()
                        .copied()
                        .filter(|v| !s.contains_vertex(*v))
                        .collect(),
                )
            })
            .collect()
    }

    pub fn link(&self, s: &Simplex) -> Result<SimplicialComplex> {
        self.require(s)?;
        Ok(Self::from_closed_set(self.link_simplices(s).into_iter().collect()))
    }

    /// Open star of `s`: every coface of `s`, `s` included.
    pub fn star_open(self: &Arc<Self>, s: &Simplex) -> Result<OpenSet> {
        self.require(s)?;
        Ok(OpenSet {
            complex: Arc::clone(self),
            members: self.cofaces(s).iter().cloned().collect(),
        })
    }

    /// Full subcomplex spanned by a vertex set.
    pub fn full_subcomplex(&self, vertices: &BTreeSet<i64>) -> SimplicialComplex {
        Self::from_closed_set(
            self.simplices
                .iter()
                .filter(|s| s.vertices().iter().all(|v| vertices.contains(v)))
                .cloned()
                .collect(),
        )
    }

    pub fn euler_characteristic(&self) -> Q {
        euler_char_cc(self.simplices.iter())
    }

    /// Barycentric subdivision. New vertex ids enumerate the old simplices in
    /// their sorted order.
    pub fn barycentric_subdivision(self: &Arc<Self>) -> SubdivisionMap {
        let ids: BTreeMap<&Simplex, i64> = self.simplices.iter().enumerate().map(|(i, s)| (s, i as i64)).collect();
        // flags ending at each simplex, built bottom-up by dimension
        let mut by_dim: Vec<&Simplex> = self.simplices.iter().collect();
        by_dim.sort_by_key(|s| s.dim());
        let mut flags: BTreeMap<&Simplex, Vec<Vec<i64>>> = BTreeMap::new();
        for s in by_dim {
            let top = ids[s];
            let mut fl = vec![vec![top]];
            for face in s.faces() {
                if &face == s {
                    continue;
                }
                let (key, _) = ids.get_key_value(&face).expect("face-closed");
                for lower in &flags[key] {
                    let mut f = lower.clone();
                    f.push(top);
                    fl.push(f);
                }
            }
            flags.insert(s, fl);
        }
        let mut target = BTreeSet::new();
        let mut carrier = BTreeMap::new();
        for (s, fl) in &flags {
            for f in fl {
                let t = Simplex::from_distinct(f.clone());
                carrier.insert(t.clone(), (*s).clone());
                target.insert(t);
            }
        }
        let origin = ids.iter().map(|(s, i)| (*i, (*s).clone())).collect();
        SubdivisionMap {
            source: Arc::clone(self),
            target: Arc::new(Self::from_closed_set(target)),
            carrier,
            stages: vec![Stage {
                before: Arc::clone(self),
                vertex_origin: origin,
            }],
        }
    }
}

/// `χ_c` of a union of open simplices: `Σ (-1)^dim σ`.
pub fn euler_char_cc<'a>(simplices: impl IntoIterator<Item = &'a Simplex>) -> Q {
    q(simplices.into_iter().map(|s| parity_i(s.dim())).sum())
}

/// A coface-closed set of simplices; its realization is an open subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSet {
    complex: Arc<SimplicialComplex>,
    members: BTreeSet<Simplex>,
}

impl OpenSet {
    pub fn new(complex: Arc<SimplicialComplex>, members: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let members: BTreeSet<Simplex> = members.into_iter().collect();
        for s in &members {
            if !complex.contains(s) {
                return Err(Error::SimplexNotInComplex(s.clone()));
            }
            if let Some(c) = complex.cofaces(s).iter().find(|c| !members.contains(*c)) {
                return Err(Error::NotOpen {
                    simplex: s.clone(),
                    coface: c.clone(),
                });
            }
        }
        Ok(OpenSet { complex, members })
    }

    pub fn whole(complex: Arc<SimplicialComplex>) -> Self {
        let members = complex.simplices().clone();
        OpenSet { complex, members }
    }

    /// Union of the open stars of the given simplices.
    pub fn star_of(complex: Arc<SimplicialComplex>, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut members = BTreeSet::new();
        for s in simplices {
            if !complex.contains(&s) {
                return Err(Error::SimplexNotInComplex(s));
            }
            members.extend(complex.cofaces(&s).iter().cloned());
        }
        Ok(OpenSet { complex, members })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn members(&self) -> &BTreeSet<Simplex> {
        &self.members
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.members.contains(s)
    }

    pub fn intersection(&self, other: &OpenSet) -> Result<OpenSet> {
        same_complex(&self.complex, &other.complex)?;
        Ok(OpenSet {
            complex: Arc::clone(&self.complex),
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    pub fn union(&self, other: &OpenSet) -> Result<OpenSet> {
        same_complex(&self.complex, &other.complex)?;
        Ok(OpenSet {
            complex: Arc::clone(&self.complex),
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    /// Whether the closed simplex `s` lies inside the open set.
    pub fn contains_closure(&self, s: &Simplex) -> bool {
        s.faces().iter().all(|f| self.members.contains(f))
    }

    /// Members whose closed simplex lies in the set; supports of compactly
    /// supported functions on the set live here.
    pub fn compact_core(&self) -> Vec<Simplex> {
        self.members
            .iter()
            .filter(|s| self.contains_closure(s))
            .cloned()
            .collect()
    }

    /// Open star of everything outside the set; together with `self` it covers.
    pub fn complement_star(&self) -> OpenSet {
        let outside = self
            .complex
            .simplices()
            .iter()
            .filter(|s| !self.members.contains(*s))
            .cloned();
        OpenSet::star_of(Arc::clone(&self.complex), outside).expect("simplices from the complex")
    }

    /// Transport along a subdivision: a target simplex belongs to the new set
    /// iff its carrier belongs to this one.
    pub fn refine(&self, sd: &SubdivisionMap) -> Result<OpenSet> {
        same_complex(&self.complex, sd.source())?;
        let members = sd
            .target()
            .simplices()
            .iter()
            .filter(|t| self.members.contains(sd.carrier(t)))
            .cloned()
            .collect();
        Ok(OpenSet {
            complex: Arc::clone(sd.target()),
            members,
        })
    }
}

pub(crate) fn same_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ComplexMismatch)
    }
}

/// One barycentric step: each new vertex is the barycenter of a simplex of `before`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub before: Arc<SimplicialComplex>,
    pub vertex_origin: BTreeMap<i64, Simplex>,
}

/// A refinement `target → source` recorded by carriers.
///
/// For a single barycentric step the target simplices are exactly the flags
/// of source simplices and the carrier of a flag is its largest element.
/// Composite maps keep the per-step data in `stages`.
#[derive(Clone, Debug)]
pub struct SubdivisionMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    carrier: BTreeMap<Simplex, Simplex>,
    stages: Vec<Stage>,
}

impl SubdivisionMap {
    pub fn identity(complex: Arc<SimplicialComplex>) -> Self {
        let carrier = complex.simplices().iter().map(|s| (s.clone(), s.clone())).collect();
        SubdivisionMap {
            source: Arc::clone(&complex),
            target: complex,
            carrier,
            stages: Vec::new(),
        }
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// The smallest source simplex containing the open target simplex.
    pub fn carrier(&self, t: &Simplex) -> &Simplex {
        &self.carrier[t]
    }

    pub fn carriers(&self) -> &BTreeMap<Simplex, Simplex> {
        &self.carrier
    }

    /// `self` followed by `next` (which must start where `self` ends).
    pub fn then(&self, next: &SubdivisionMap) -> Result<SubdivisionMap> {
        same_complex(&self.target, &next.source)?;
        let carrier = next
            .carrier
            .iter()
            .map(|(t, mid)| (t.clone(), self.carrier[mid].clone()))
            .collect();
        let mut stages = self.stages.clone();
        stages.extend(next.stages.iter().cloned());
        Ok(SubdivisionMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&next.target),
            carrier,
            stages,
        })
    }
}

/// Necessary conditions for a closed combinatorial `n`-manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub dim: usize,
    pub pseudomanifold: bool,
    pub links_have_sphere_euler_characteristic: bool,
    pub failures: Vec<String>,
}

impl ManifoldReport {
    pub fn passed(&self) -> bool {
        self.pseudomanifold && self.links_have_sphere_euler_characteristic
    }
}

/// Checks that every `(n-1)`-simplex has exactly two `n`-dimensional cofaces
/// and that the link of every `k`-simplex has the Euler characteristic of
/// `S^(n-k-1)`. Only necessary conditions; spheres are not recognized.
pub fn manifold_report(k: &SimplicialComplex, n: usize) -> ManifoldReport {
    let mut failures = Vec::new();
    let mut pseudo = true;
    let mut links = true;
    for s in k.simplices() {
        if s.dim() > n {
            pseudo = false;
            failures.push(format!("{s} has dimension above {n}"));
            continue;
        }
        if n > 0 && s.dim() == n - 1 {
            let c = k.cofaces(s).iter().filter(|c| c.dim() == n).count();
            if c != 2 {
                pseudo = false;
                failures.push(format!("{s} lies in {c} {n}-simplices, expected 2"));
            }
        }
        let sphere_dim = n - s.dim();
        // χ(S^m) = 1 + (-1)^m for m = sphere_dim - 1; S^-1 is empty
        let expected = if sphere_dim == 0 {
            q(0)
        } else {
            q(1 + parity_i(sphere_dim - 1))
        };
        let got = euler_char_cc(k.link_simplices(s).iter());
        if got != expected {
            links = false;
            failures.push(format!(
                "link of {s} has Euler characteristic {got}, expected {expected}"
            ));
        }
    }
    ManifoldReport {
        dim: n,
        pseudomanifold: pseudo,
        links_have_sphere_euler_characteristic: links,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn filled_triangle() -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_maximal([[0, 1, 2]]).unwrap())
    }

    #[test]
    fn simplex_rejects_repeats_and_empty() {
        assert!(Simplex::new([1, 1]).is_err());
        assert!(Simplex::new([]).is_err());
        assert_eq!(s(&[3, 1, 2]).vertices(), &[1, 2, 3]);
    }

    #[test]
    fn link_examples() {
        let circle = SimplicialComplex::from_maximal([[0, 1], [1, 2], [0, 2]]).unwrap();
        let lk = circle.link(&s(&[0])).unwrap();
        assert_eq!(
            lk.simplices().iter().cloned().collect::<Vec<_>>(),
            vec![s(&[1]), s(&[2])]
        );

        let tri = filled_triangle();
        let lk = tri.link(&s(&[0, 1])).unwrap();
        assert_eq!(lk.simplices().iter().cloned().collect::<Vec<_>>(), vec![s(&[2])]);
        assert!(tri.link(&s(&[0, 1, 2])).unwrap().is_empty());
        assert_eq!(tri.link(&s(&[7])).unwrap_err(), Error::SimplexNotInComplex(s(&[7])));
    }

    #[test]
    fn star_examples() {
        let tri = filled_triangle();
        let st = tri.star_open(&s(&[0])).unwrap();
        let expected: BTreeSet<_> = [s(&[0]), s(&[0, 1]), s(&[0, 2]), s(&[0, 1, 2])].into();
        assert_eq!(st.members(), &expected);
        let top = tri.star_open(&s(&[0, 1, 2])).unwrap();
        assert_eq!(top.members().len(), 1);

        let path = Arc::new(SimplicialComplex::from_maximal([[0, 1], [1, 2]]).unwrap());
        let st = path.star_open(&s(&[1])).unwrap();
        let expected: BTreeSet<_> = [s(&[1]), s(&[0, 1]), s(&[1, 2])].into();
        assert_eq!(st.members(), &expected);
    }

    #[test]
    fn subdivision_counts() {
        let edge = Arc::new(SimplicialComplex::from_maximal([[0, 1]]).unwrap());
        let sd = edge.barycentric_subdivision();
        assert_eq!(sd.target().f_vector(), vec![3, 2]);

        let sd = filled_triangle().barycentric_subdivision();
        assert_eq!(sd.target().f_vector(), vec![7, 12, 6]);
        assert_eq!(sd.target().len(), 25);
        assert_eq!(sd.target().euler_characteristic(), q(1));
    }

    #[test]
    fn subdivision_flags_by_brute_force() {
        // independent enumeration: all chains of the face poset
        let tri = filled_triangle();
        let simplices: Vec<Simplex> = tri.simplices().iter().cloned().collect();
        let n = simplices.len();
        let mut chains = 0;
        for mask in 1u32..(1 << n) {
            let mut chosen: Vec<&Simplex> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &simplices[i]).collect();
            chosen.sort_by_key(|s| s.dim());
            if chosen.windows(2).all(|w| w[0].is_face_of(w[1]) && w[0] != w[1]) {
                chains += 1;
            }
        }
        assert_eq!(chains, 25);
    }

    #[test]
    fn carrier_is_top_of_flag_and_monotone() {
        let tri = filled_triangle();
        let sd = tri.barycentric_subdivision();
        let origin = &sd.stages()[0].vertex_origin;
        for t in sd.target().simplices() {
            let top = t.vertices().iter().map(|v| &origin[v]).max_by_key(|s| s.dim()).unwrap();
            assert_eq!(sd.carrier(t), top);
            for f in t.faces() {
                assert!(sd.carrier(&f).is_face_of(sd.carrier(t)));
            }
        }
    }

    #[test]
    fn euler_char_examples() {
        assert_eq!(euler_char_cc([&s(&[0, 1])]), q(-1));
        let edge = SimplicialComplex::from_maximal([[0, 1]]).unwrap();
        assert_eq!(edge.euler_characteristic(), q(1));
        let oct = SimplicialComplex::from_maximal([
            [0, 2, 4],
            [0, 2, 5],
            [0, 3, 4],
            [0, 3, 5],
            [1, 2, 4],
            [1, 2, 5],
            [1, 3, 4],
            [1, 3, 5],
        ])
        .unwrap();
        assert_eq!(oct.euler_characteristic(), q(2));
    }

    #[test]
    fn manifold_report_examples() {
        let oct = SimplicialComplex::from_maximal([
            [0, 2, 4],
            [0, 2, 5],
            [0, 3, 4],
            [0, 3, 5],
            [1, 2, 4],
            [1, 2, 5],
            [1, 3, 4],
            [1, 3, 5],
        ])
        .unwrap();
        assert!(manifold_report(&oct, 2).passed());

        let path = SimplicialComplex::from_maximal([[0, 1], [1, 2]]).unwrap();
        let r = manifold_report(&path, 1);
        assert!(!r.pseudomanifold);

        let bowtie = SimplicialComplex::from_maximal([[0, 1, 2], [0, 3, 4]]).unwrap();
        let r = manifold_report(&bowtie, 2);
        assert!(!r.links_have_sphere_euler_characteristic);
        assert!(r
            .failures
            .iter()
            .any(|f| f.starts_with("link of [0] has Euler characteristic 2")));
    }

    #[test]
    fn loader_names_missing_vertex() {
        let err = SimplicialComplex::with_vertices(&[0, 1], &[vec![0, 1, 2]]).unwrap_err();
        assert_eq!(
            err,
            Error::NotFaceClosed {
                simplex: s(&[0, 1, 2]),
                missing: s(&[2])
            }
        );
        let err = SimplicialComplex::from_simplices([s(&[0]), s(&[0, 1])]).unwrap_err();
        assert_eq!(
            err,
            Error::NotFaceClosed {
                simplex: s(&[0, 1]),
                missing: s(&[1])
            }
        );
    }

    #[test]
    fn open_set_validation() {
        let tri = filled_triangle();
        assert!(matches!(
            OpenSet::new(Arc::clone(&tri), [s(&[0])]),
            Err(Error::NotOpen { .. })
        ));
        let u = tri.star_open(&s(&[0])).unwrap();
        assert_eq!(u.compact_core(), vec![s(&[0])]);
        let cover = u.union(&u.complement_star()).unwrap();
        assert_eq!(cover.members(), tri.simplices());
    }
}
