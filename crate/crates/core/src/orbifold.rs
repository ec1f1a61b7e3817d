//! Global quotients `X = M/G` of a complex by a finite simplicial action.
//!
//! Group elements are permutations of a finite domain containing the
//! vertices. Domain points that are not vertices ("ghost" labels) let a
//! group act with a kernel, e.g. `Z/2` acting trivially on a point.
//!
//! Classes in `Fun_c(M)_G` are stored as their `G`-average. `p_!` uses the
//! norm convention `p_!(c)(σ̄) = Σ_g (g·h)(σ̃) = |G| · avg(σ̃)`; the set-theoretic
//! fiber sum is [`pushforward_fiber_sum`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::Serialize;

use crate::charts::{cc, intersect_zero_section_seeded, EmbeddedChart, LagrangianCycleTable};
use crate::complex::{same_complex, Simplex, SimplicialComplex, SubdivisionMap};
use crate::constructible::ConstructibleFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{q, qf, render, zero, Q};

/// Closure beyond this many elements is refused.
pub const MAX_GROUP_ORDER: usize = 10080;

struct SimplexOrbits {
    orbit_of: BTreeMap<Simplex, usize>,
    orbits: Vec<Vec<Simplex>>,
}

/// A finite group acting simplicially on a complex.
pub struct GroupAction {
    complex: Arc<SimplicialComplex>,
    domain: Vec<i64>,
    index: BTreeMap<i64, usize>,
    elements: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    generators: Vec<usize>,
    orbits: OnceLock<SimplexOrbits>,
}

impl fmt::Debug for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupAction")
            .field("order", &self.elements.len())
            .field("generators", &self.generator_maps())
            .finish()
    }
}

impl PartialEq for GroupAction {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex
            && self.domain == other.domain
            && self.lookup.len() == other.lookup.len()
            && self.elements.iter().all(|e| other.lookup.contains_key(e))
    }
}

impl GroupAction {
    /// Close the given generators under composition. Each generator maps
    /// domain points to domain points; vertices not mentioned are fixed.
    pub fn new(complex: Arc<SimplicialComplex>, generators: &[BTreeMap<i64, i64>]) -> Result<Self> {
        let mut domain: BTreeSet<i64> = complex.vertices().clone();
        for g in generators {
            domain.extend(g.keys());
            domain.extend(g.values());
        }
        let domain: Vec<i64> = domain.into_iter().collect();
        let index: BTreeMap<i64, usize> = domain.iter().enumerate().map(|(i, v)| (*v, i)).collect();

        let mut perms = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            let perm: Vec<usize> = domain.iter().map(|v| index[g.get(v).unwrap_or(v)]).collect();
            let image: BTreeSet<usize> = perm.iter().copied().collect();
            if image.len() != domain.len() {
                return Err(Error::NotAPermutation(format!("generator {gi} is not injective")));
            }
            for v in complex.vertices() {
                let w = domain[perm[index[v]]];
                if !complex.vertices().contains(&w) {
                    return Err(Error::NotAPermutation(format!(
                        "generator {gi} sends vertex {v} to {w}, which is not a vertex"
                    )));
                }
            }
            for s in complex.simplices() {
                let image = Simplex::from_distinct(s.vertices().iter().map(|v| domain[perm[index[v]]]).collect());
                if !complex.contains(&image) {
                    return Err(Error::NotSimplicial {
                        simplex: s.clone(),
                        image: image.to_string(),
                    });
                }
            }
            perms.push(perm);
        }

        let identity: Vec<usize> = (0..domain.len()).collect();
        let mut elements = vec![identity.clone()];
        let mut lookup = HashMap::from([(identity, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for p in &perms {
                let c: Vec<usize> = elements[e].iter().map(|i| p[*i]).collect();
                if !lookup.contains_key(&c) {
                    if elements.len() == MAX_GROUP_ORDER {
                        return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
                    }
                    lookup.insert(c.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(c);
                }
            }
        }
        let generators = perms.iter().map(|p| lookup[p]).collect();
        Ok(GroupAction {
            complex,
            domain,
            index,
            elements,
            lookup,
            generators,
            orbits: OnceLock::new(),
        })
    }

    pub fn trivial(complex: Arc<SimplicialComplex>) -> Self {
        Self::new(complex, &[]).expect("the trivial group acts on any complex")
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element indices of the generators, in the order supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_maps(&self) -> Vec<BTreeMap<i64, i64>> {
        self.generators.iter().map(|g| self.element_map(*g)).collect()
    }

    /// Element `g` as a map on the domain, fixed points omitted.
    pub fn element_map(&self, g: usize) -> BTreeMap<i64, i64> {
        self.elements[g]
            .iter()
            .enumerate()
            .filter(|(i, j)| i != *j)
            .map(|(i, j)| (self.domain[i], self.domain[*j]))
            .collect()
    }

    /// Index of `a ∘ b` (apply `b` first).
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let c: Vec<usize> = self.elements[b].iter().map(|i| self.elements[a][*i]).collect();
        self.lookup[&c]
    }

    pub fn inverse(&self, g: usize) -> usize {
        let mut inv = vec![0; self.domain.len()];
        for (i, j) in self.elements[g].iter().enumerate() {
            inv[*j] = i;
        }
        self.lookup[&inv]
    }

    pub fn apply_vertex(&self, g: usize, v: i64) -> i64 {
        self.domain[self.elements[g][self.index[&v]]]
    }

    pub fn apply(&self, g: usize, s: &Simplex) -> Simplex {
        Simplex::from_distinct(s.vertices().iter().map(|v| self.apply_vertex(g, *v)).collect())
    }

    /// `(g·h)(gσ) = h(σ)`.
    pub fn act(&self, g: usize, h: &ConstructibleFunction) -> Result<ConstructibleFunction> {
        same_complex(h.complex(), &self.complex)?;
        ConstructibleFunction::new(
            Arc::clone(&self.complex),
            h.support().iter().map(|(s, v)| (self.apply(g, s), v.clone())),
        )
    }

    /// Orbit representative of a vertex: its smallest image.
    pub fn vertex_orbit(&self, v: i64) -> i64 {
        (0..self.order()).map(|g| self.apply_vertex(g, v)).min().unwrap_or(v)
    }

    fn simplex_orbits(&self) -> &SimplexOrbits {
        self.orbits.get_or_init(|| {
            let mut orbit_of = BTreeMap::new();
            let mut orbits = Vec::new();
            for s in self.complex.simplices() {
                if orbit_of.contains_key(s) {
                    continue;
                }
                let orbit: BTreeSet<Simplex> = (0..self.order()).map(|g| self.apply(g, s)).collect();
                for t in &orbit {
                    orbit_of.insert(t.clone(), orbits.len());
                }
                orbits.push(orbit.into_iter().collect());
            }
            SimplexOrbits { orbit_of, orbits }
        })
    }

    /// Simplex orbits, each sorted, ordered by their smallest member.
    pub fn orbits(&self) -> &[Vec<Simplex>] {
        &self.simplex_orbits().orbits
    }

    pub fn orbit_index(&self, s: &Simplex) -> Option<usize> {
        self.simplex_orbits().orbit_of.get(s).copied()
    }

    /// Elements fixing `s` setwise.
    pub fn stabilizer(&self, s: &Simplex) -> Vec<usize> {
        (0..self.order()).filter(|g| self.apply(*g, s) == *s).collect()
    }

    /// Canonical label of the conjugacy class of a subgroup.
    pub fn conjugacy_label(&self, subgroup: &[usize]) -> Vec<usize> {
        (0..self.order())
            .map(|g| {
                let gi = self.inverse(g);
                let mut c: Vec<usize> = subgroup.iter().map(|h| self.compose(self.compose(g, *h), gi)).collect();
                c.sort_unstable();
                c
            })
            .min()
            .unwrap_or_default()
    }

    fn same_action(&self, other: &GroupAction) -> Result<()> {
        if std::ptr::eq(self, other) || self == other {
            Ok(())
        } else {
            Err(Error::ComplexMismatch)
        }
    }
}

/// Outcome of [`check_regularity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    /// A simplex fixed setwise is fixed pointwise.
    pub setwise_fixed_pointwise: bool,
    /// No simplex has two vertices in one orbit.
    pub orbits_meet_simplices_once: bool,
    /// Simplices with the same vertex-orbit image form a single orbit.
    pub fibers_are_orbits: bool,
    pub failures: Vec<String>,
}

impl RegularityReport {
    /// The two conditions on individual simplices.
    pub fn simplexwise(&self) -> bool {
        self.setwise_fixed_pointwise && self.orbits_meet_simplices_once
    }

    /// Everything [`quotient`] needs.
    pub fn passed(&self) -> bool {
        self.simplexwise() && self.fibers_are_orbits
    }
}

const MAX_REPORTED: usize = 20;

pub fn check_regularity(action: &GroupAction) -> RegularityReport {
    let mut r = RegularityReport {
        setwise_fixed_pointwise: true,
        orbits_meet_simplices_once: true,
        fibers_are_orbits: true,
        failures: Vec::new(),
    };
    let note = |r: &mut RegularityReport, msg: String| {
        if r.failures.len() < MAX_REPORTED {
            r.failures.push(msg);
        }
    };
    let vorbit: BTreeMap<i64, i64> = action
        .complex
        .vertices()
        .iter()
        .map(|v| (*v, action.vertex_orbit(*v)))
        .collect();
    let mut by_image: BTreeMap<Vec<i64>, BTreeSet<usize>> = BTreeMap::new();
    for s in action.complex.simplices() {
        for g in action.stabilizer(s) {
            if s.vertices().iter().any(|v| action.apply_vertex(g, *v) != *v) {
                r.setwise_fixed_pointwise = false;
                note(&mut r, format!("{s} is fixed setwise but not pointwise"));
                break;
            }
        }
        let mut image: Vec<i64> = s.vertices().iter().map(|v| vorbit[v]).collect();
        image.sort_unstable();
        let before = image.len();
        image.dedup();
        if image.len() != before {
            r.orbits_meet_simplices_once = false;
            note(&mut r, format!("{s} has two vertices in one orbit"));
        }
        by_image
            .entry(image)
            .or_default()
            .insert(action.orbit_index(s).expect("every simplex has an orbit"));
    }
    for (image, orbits) in by_image {
        if orbits.len() > 1 {
            r.fibers_are_orbits = false;
            note(
                &mut r,
                format!("{} simplex orbits share the image {image:?}", orbits.len()),
            );
        }
    }
    r
}

/// An action together with the subdivision that produced it.
#[derive(Clone, Debug)]
pub struct Regularized {
    pub action: Arc<GroupAction>,
    pub subdivision: SubdivisionMap,
}

/// The action induced on a one-stage barycentric subdivision.
pub fn induced_action(action: &GroupAction, sd: &SubdivisionMap) -> Result<GroupAction> {
    same_complex(&action.complex, sd.source())?;
    let [stage] = sd.stages() else {
        return Err(Error::Invalid {
            object: "subdivision".into(),
            reason: "expected a single barycentric stage".into(),
        });
    };
    let by_origin: BTreeMap<&Simplex, i64> = stage.vertex_origin.iter().map(|(v, s)| (s, *v)).collect();
    let ghosts: Vec<i64> = action
        .domain
        .iter()
        .copied()
        .filter(|v| !action.complex.vertices().contains(v))
        .collect();
    let generators: Vec<BTreeMap<i64, i64>> = action
        .generators
        .iter()
        .map(|g| {
            let mut m: BTreeMap<i64, i64> = stage
                .vertex_origin
                .iter()
                .map(|(v, s)| (*v, by_origin[&action.apply(*g, s)]))
                .collect();
            for x in &ghosts {
                m.insert(*x, action.apply_vertex(*g, *x));
            }
            m
        })
        .collect();
    GroupAction::new(Arc::clone(sd.target()), &generators)
}

/// Subdivide (at most twice) until [`check_regularity`] passes.
pub fn regularize(action: &Arc<GroupAction>) -> Result<Regularized> {
    let mut current = Arc::clone(action);
    let mut sd = SubdivisionMap::identity(Arc::clone(&action.complex));
    for _ in 0..2 {
        if check_regularity(&current).passed() {
            break;
        }
        let step = current.complex.barycentric_subdivision();
        current = Arc::new(induced_action(&current, &step)?);
        sd = sd.then(&step)?;
    }
    if !check_regularity(&current).passed() {
        return Err(Error::StillIrregular(2));
    }
    Ok(Regularized {
        action: current,
        subdivision: sd,
    })
}

/// Coarse complex, projection and stabilizer orders of a regular action.
#[derive(Clone, Debug)]
pub struct QuotientData {
    action: Arc<GroupAction>,
    coarse: Arc<SimplicialComplex>,
    projection: BTreeMap<Simplex, Simplex>,
    fibers: BTreeMap<Simplex, Vec<Simplex>>,
    stabilizer_order: BTreeMap<Simplex, usize>,
}

pub fn quotient(action: &Arc<GroupAction>) -> Result<QuotientData> {
    let report = check_regularity(action);
    if !report.passed() {
        return Err(Error::IrregularAction(report.failures.join("; ")));
    }
    let mut projection = BTreeMap::new();
    let mut fibers: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    let mut stabilizer_order = BTreeMap::new();
    for s in action.complex.simplices() {
        let image = Simplex::from_distinct(s.vertices().iter().map(|v| action.vertex_orbit(*v)).collect());
        fibers.entry(image.clone()).or_default().push(s.clone());
        projection.insert(s.clone(), image);
        stabilizer_order.insert(s.clone(), action.stabilizer(s).len());
    }
    let coarse = Arc::new(SimplicialComplex::from_simplices(fibers.keys().cloned())?);
    for (cs, fiber) in &fibers {
        let stab = stabilizer_order[&fiber[0]];
        if fiber.len() * stab != action.order() {
            return Err(Error::IrregularAction(format!(
                "fiber of {cs} has {} simplices with stabilizer order {stab} in a group of order {}",
                fiber.len(),
                action.order()
            )));
        }
    }
    Ok(QuotientData {
        action: Arc::clone(action),
        coarse,
        projection,
        fibers,
        stabilizer_order,
    })
}

impl QuotientData {
    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    pub fn coarse(&self) -> &Arc<SimplicialComplex> {
        &self.coarse
    }

    pub fn project(&self, s: &Simplex) -> Result<&Simplex> {
        self.projection
            .get(s)
            .ok_or_else(|| Error::SimplexNotInComplex(s.clone()))
    }

    pub fn fiber(&self, coarse: &Simplex) -> Result<&[Simplex]> {
        self.fibers
            .get(coarse)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::SimplexNotInComplex(coarse.clone()))
    }

    /// `|G_σ|` for a simplex of the fine complex.
    pub fn stabilizer_order(&self, s: &Simplex) -> Result<usize> {
        self.stabilizer_order
            .get(s)
            .copied()
            .ok_or_else(|| Error::SimplexNotInComplex(s.clone()))
    }

    /// `|G_σ̃|` for any lift of a coarse simplex.
    pub fn coarse_stabilizer_order(&self, coarse: &Simplex) -> Result<usize> {
        self.stabilizer_order(&self.fiber(coarse)?[0])
    }

    fn lift(&self, coarse: &Simplex) -> &Simplex {
        &self.fibers[coarse][0]
    }
}

/// `ι(σ̄) = 1/|G_σ̃|` on the coarse complex.
pub fn iota(qd: &QuotientData) -> ConstructibleFunction {
    ConstructibleFunction::new(
        Arc::clone(&qd.coarse),
        qd.fibers
            .iter()
            .map(|(cs, fiber)| (cs.clone(), qf(1, qd.stabilizer_order[&fiber[0]] as i64))),
    )
    .expect("coarse simplices belong to the coarse complex")
}

/// A class in `Fun_c(M)_G`, stored as its `G`-average.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinvariantClass {
    action: Arc<GroupAction>,
    avg: ConstructibleFunction,
}

impl CoinvariantClass {
    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    pub fn average(&self) -> &ConstructibleFunction {
        &self.avg
    }
}

/// `G`-average `(1/|G|) Σ_g g·h`, computed orbitwise.
pub fn average(h: &ConstructibleFunction, action: &GroupAction) -> Result<ConstructibleFunction> {
    same_complex(h.complex(), &action.complex)?;
    let mut values = BTreeMap::new();
    let mut sums: BTreeMap<usize, Q> = BTreeMap::new();
    for (s, v) in h.support() {
        let o = action.orbit_index(s).expect("every simplex has an orbit");
        *sums.entry(o).or_insert_with(zero) += v;
    }
    for (o, total) in sums {
        let orbit = &action.orbits()[o];
        let mean = total / q(orbit.len() as i64);
        for t in orbit {
            values.insert(t.clone(), mean.clone());
        }
    }
    ConstructibleFunction::new(Arc::clone(&action.complex), values)
}

pub fn class_of(h: &ConstructibleFunction, action: &Arc<GroupAction>) -> Result<CoinvariantClass> {
    Ok(CoinvariantClass {
        action: Arc::clone(action),
        avg: average(h, action)?,
    })
}

/// `∫_X [h] = ∫_M h`.
pub fn orbifold_integral(c: &CoinvariantClass) -> Q {
    c.avg.euler_integral()
}

/// Norm-convention pushforward to the coarse space.
pub fn pushforward_p(c: &CoinvariantClass, qd: &QuotientData) -> Result<ConstructibleFunction> {
    c.action.same_action(&qd.action)?;
    let g = q(qd.action.order() as i64);
    ConstructibleFunction::new(
        Arc::clone(&qd.coarse),
        qd.fibers.keys().map(|cs| (cs.clone(), &g * c.avg.value(qd.lift(cs)))),
    )
}

/// Set-theoretic fiber sum `σ̄ ↦ Σ_{τ ∈ fiber(σ̄)} h(τ)`.
pub fn pushforward_fiber_sum(c: &CoinvariantClass, qd: &QuotientData) -> Result<ConstructibleFunction> {
    c.action.same_action(&qd.action)?;
    ConstructibleFunction::new(
        Arc::clone(&qd.coarse),
        qd.fibers
            .iter()
            .map(|(cs, fiber)| (cs.clone(), fiber.iter().fold(zero(), |acc, t| acc + c.avg.value(t)))),
    )
}

/// `∫_{X̄} p_!(c) · ι`.
pub fn coarse_weighted_integral(c: &CoinvariantClass, qd: &QuotientData) -> Result<Q> {
    Ok(pushforward_p(c, qd)?.mul(&iota(qd))?.euler_integral())
}

/// Pullback along the projection: each simplex takes the value of its image.
pub fn transfer(f: &ConstructibleFunction, qd: &QuotientData) -> Result<ConstructibleFunction> {
    same_complex(f.complex(), &qd.coarse)?;
    ConstructibleFunction::new(
        Arc::clone(&qd.action.complex),
        qd.projection.iter().map(|(s, cs)| (s.clone(), f.value(cs))),
    )
}

/// Matrix of `p_!` on orbit-indicator classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PIsoReport {
    pub group_order: usize,
    pub classes: usize,
    pub coarse_simplices: usize,
    pub rank: usize,
    pub determinant: String,
    pub inverse_verified: bool,
    pub invertible: bool,
}

pub fn verify_p_iso(action: &Arc<GroupAction>, qd: &QuotientData) -> Result<PIsoReport> {
    action.same_action(&qd.action)?;
    let rows: Vec<&Simplex> = qd.coarse.simplices().iter().collect();
    let mut columns: Vec<Vec<Q>> = Vec::new();
    for orbit in action.orbits() {
        let h = ConstructibleFunction::indicator(Arc::clone(&action.complex), &orbit[..1])?;
        let image = pushforward_p(&class_of(&h, action)?, qd)?;
        columns.push(rows.iter().map(|cs| image.value(cs)).collect());
    }
    let m: Matrix = linalg::transpose(&columns);
    let rank = linalg::rank(&m);
    let square = rows.len() == columns.len();
    let determinant = if square { linalg::determinant(&m) } else { zero() };
    let inverse_verified =
        square && linalg::inverse(&m).is_some_and(|inv| linalg::mat_mul(&m, &inv) == linalg::identity(rows.len()));
    Ok(PIsoReport {
        group_order: action.order(),
        classes: columns.len(),
        coarse_simplices: rows.len(),
        rank,
        determinant: render(&determinant),
        inverse_verified,
        invertible: square && rank == rows.len() && !determinant.is_zero() && inverse_verified,
    })
}

/// `p_! ∘ transfer` on coarse indicators, under both conventions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub group_order: usize,
    pub free: bool,
    /// Coarse simplex → scalar `d` with `p_!(transfer(1_σ̄)) = d · 1_σ̄`.
    pub norm_diagonal: BTreeMap<String, String>,
    pub fiber_sum_diagonal: BTreeMap<String, String>,
    pub diagonal: bool,
    pub invertible: bool,
    /// Norm composite equals `|G|` times the identity.
    pub norm_is_group_order: bool,
    /// For free actions both conventions equal `|G|` times the identity.
    pub free_matches_group_order: bool,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.diagonal && self.invertible && self.norm_is_group_order && self.free_matches_group_order
    }
}

pub fn transfer_report(qd: &QuotientData) -> Result<TransferReport> {
    let order = q(qd.action.order() as i64);
    let mut diagonal = true;
    let mut invertible = true;
    let mut norm_diagonal = BTreeMap::new();
    let mut fiber_sum_diagonal = BTreeMap::new();
    let mut norm_is_group_order = true;
    let mut fiber_is_group_order = true;
    for cs in qd.coarse.simplices() {
        let bar = ConstructibleFunction::indicator(Arc::clone(&qd.coarse), std::slice::from_ref(cs))?;
        let class = class_of(&transfer(&bar, qd)?, &qd.action)?;
        for (image, out, at_order) in [
            (pushforward_p(&class, qd)?, &mut norm_diagonal, &mut norm_is_group_order),
            (
                pushforward_fiber_sum(&class, qd)?,
                &mut fiber_sum_diagonal,
                &mut fiber_is_group_order,
            ),
        ] {
            let d = image.value(cs);
            diagonal &= image.support().keys().all(|t| t == cs);
            invertible &= !d.is_zero();
            *at_order &= d == order;
            out.insert(cs.to_string(), render(&d));
        }
    }
    let free = qd.stabilizer_order.values().all(|s| *s == 1);
    Ok(TransferReport {
        group_order: qd.action.order(),
        free,
        norm_diagonal,
        fiber_sum_diagonal,
        diagonal,
        invertible,
        norm_is_group_order,
        free_matches_group_order: !free || fiber_is_group_order,
    })
}

/// One piece of a simple decomposition: `coefficient · 1_simplices`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePiece {
    pub coefficient: Q,
    /// Conjugacy-class label of the common isotropy group.
    pub isotropy: Vec<usize>,
    pub simplices: BTreeSet<Simplex>,
}

impl SimplePiece {
    pub fn indicator(&self, complex: &Arc<SimplicialComplex>) -> Result<ConstructibleFunction> {
        ConstructibleFunction::indicator(Arc::clone(complex), &self.simplices)
    }
}

/// Whether a set of open simplices is locally closed (convex in the face poset).
pub fn is_locally_closed(k: &SimplicialComplex, set: &BTreeSet<Simplex>) -> bool {
    set.iter().all(|low| {
        k.cofaces(low)
            .iter()
            .all(|mid| set.contains(mid) || !set.iter().any(|high| mid.is_face_of(high)))
    })
}

/// Split `h` into coefficients times indicators of locally closed sets on
/// which the isotropy class is constant.
pub fn simple_decomposition(h: &ConstructibleFunction, action: &GroupAction) -> Result<Vec<SimplePiece>> {
    same_complex(h.complex(), &action.complex)?;
    let mut labels: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut groups: BTreeMap<(Vec<usize>, Q), BTreeSet<Simplex>> = BTreeMap::new();
    for (s, v) in h.support() {
        let stab = action.stabilizer(s);
        let label = labels
            .entry(stab.clone())
            .or_insert_with(|| action.conjugacy_label(&stab))
            .clone();
        groups.entry((label, v.clone())).or_default().insert(s.clone());
    }
    let mut pieces = Vec::new();
    for ((isotropy, coefficient), simplices) in groups {
        if is_locally_closed(&action.complex, &simplices) {
            pieces.push(SimplePiece {
                coefficient,
                isotropy,
                simplices,
            });
            continue;
        }
        let mut by_dim: BTreeMap<usize, BTreeSet<Simplex>> = BTreeMap::new();
        for s in simplices {
            by_dim.entry(s.dim()).or_default().insert(s);
        }
        for (_, simplices) in by_dim {
            pieces.push(SimplePiece {
                coefficient: coefficient.clone(),
                isotropy: isotropy.clone(),
                simplices,
            });
        }
    }
    Ok(pieces)
}

/// A chart with an orthogonal linear representation compatible with the action.
#[derive(Clone, Debug)]
pub struct EquivariantChart {
    chart: Arc<EmbeddedChart>,
    action: Arc<GroupAction>,
    generator_matrices: Vec<Matrix>,
    matrices: Vec<Matrix>,
}

impl EquivariantChart {
    /// `generator_matrices[i]` represents generator `i` of the action.
    pub fn new(chart: Arc<EmbeddedChart>, action: Arc<GroupAction>, generator_matrices: Vec<Matrix>) -> Result<Self> {
        same_complex(chart.complex(), &action.complex)?;
        let n = chart.ambient_dim();
        if generator_matrices.len() != action.generators.len() {
            return Err(Error::IncompatibleAction(format!(
                "{} matrices for {} generators",
                generator_matrices.len(),
                action.generators.len()
            )));
        }
        for (i, m) in generator_matrices.iter().enumerate() {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.len(),
                });
            }
            if linalg::mat_mul(m, &linalg::transpose(m)) != linalg::identity(n) {
                return Err(Error::NonOrthogonalMatrix(i));
            }
            let g = action.generators[i];
            for (v, x) in chart.coords() {
                let w = action.apply_vertex(g, *v);
                if linalg::mat_vec(m, x) != chart.coords()[&w] {
                    return Err(Error::IncompatibleAction(format!(
                        "matrix {i} does not send vertex {v} to vertex {w}"
                    )));
                }
            }
        }
        // words in the generators, matching how the action was closed
        let mut matrices: Vec<Option<Matrix>> = vec![None; action.order()];
        matrices[0] = Some(linalg::identity(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let me = matrices[e].clone().expect("queued elements have matrices");
            for (i, g) in action.generators.iter().enumerate() {
                let c = action.compose(*g, e);
                if matrices[c].is_none() {
                    matrices[c] = Some(linalg::mat_mul(&generator_matrices[i], &me));
                    queue.push_back(c);
                }
            }
        }
        Ok(EquivariantChart {
            chart,
            action,
            generator_matrices,
            matrices: matrices
                .into_iter()
                .map(|m| m.expect("generators reach every element"))
                .collect(),
        })
    }

    pub fn chart(&self) -> &Arc<EmbeddedChart> {
        &self.chart
    }

    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn generator_matrices(&self) -> &[Matrix] {
        &self.generator_matrices
    }

    /// Transport along a regularization of the action.
    pub fn regularize(&self) -> Result<(EquivariantChart, Regularized)> {
        let reg = regularize(&self.action)?;
        let chart = Arc::new(self.chart.subdivide(&reg.subdivision)?);
        let eq = EquivariantChart::new(chart, Arc::clone(&reg.action), self.generator_matrices.clone())?;
        Ok((eq, reg))
    }
}

/// `g` applied to a cycle table: the chamber of `ξ` at `σ` goes to the
/// chamber of `ρ_g ξ` at `gσ`.
pub fn equivariant_table_action(
    g: usize,
    table: &LagrangianCycleTable,
    eq: &EquivariantChart,
) -> Result<LagrangianCycleTable> {
    let chart = table.chart();
    if !(Arc::ptr_eq(chart, &eq.chart) || **chart == *eq.chart) {
        return Err(Error::ComplexMismatch);
    }
    let rho = &eq.matrices[g];
    let mut entries = Vec::with_capacity(table.entries().len());
    for ((s, e), m) in table.entries() {
        let witness = &chart
            .chambers(s)?
            .find(e)
            .expect("table entries name existing chambers")
            .witness;
        let gs = eq.action.apply(g, s);
        let xi = linalg::mat_vec(rho, witness);
        let ge = chart.chambers(&gs)?.signs_of(chart, &xi).ok_or_else(|| {
            Error::IncompatibleAction(format!("image of a chamber witness at {s} lies on a wall at {gs}"))
        })?;
        entries.push(((gs, ge), m.clone()));
    }
    LagrangianCycleTable::new(Arc::clone(chart), entries)
}

/// The triple compared by the orbifold index formula, plus the
/// equivariance checks that make it well defined on classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbifoldIndexReport {
    pub manifold_integral: String,
    pub orbifold_integral: String,
    pub coarse_weighted_integral: String,
    pub intersection: String,
    pub cc_equivariant: bool,
    pub intersection_invariant: bool,
}

impl OrbifoldIndexReport {
    pub fn passed(&self) -> bool {
        self.cc_equivariant
            && self.intersection_invariant
            && self.manifold_integral == self.orbifold_integral
            && self.orbifold_integral == self.coarse_weighted_integral
            && self.orbifold_integral == self.intersection
    }
}

pub fn orbifold_index_check(
    h: &ConstructibleFunction,
    eq: &EquivariantChart,
    qd: &QuotientData,
    seed: u64,
) -> Result<OrbifoldIndexReport> {
    eq.action.same_action(&qd.action)?;
    let class = class_of(h, &eq.action)?;
    let table = cc(h, &eq.chart)?;
    let base = intersect_zero_section_seeded(&table, seed)?;
    let mut cc_equivariant = true;
    let mut intersection_invariant = true;
    for g in 0..eq.action.order() {
        let moved = equivariant_table_action(g, &table, eq)?;
        cc_equivariant &= cc(&eq.action.act(g, h)?, &eq.chart)? == moved;
        intersection_invariant &= intersect_zero_section_seeded(&moved, seed)? == base;
    }
    let class_table = cc(class.average(), &eq.chart)?;
    Ok(OrbifoldIndexReport {
        manifold_integral: render(&h.euler_integral()),
        orbifold_integral: render(&orbifold_integral(&class)),
        coarse_weighted_integral: render(&coarse_weighted_integral(&class, qd)?),
        intersection: render(&intersect_zero_section_seeded(&class_table, seed)?),
        cc_equivariant,
        intersection_invariant,
    })
}
