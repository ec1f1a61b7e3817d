//! Gluing of compactly supported functions and cycles along open covers.
//!
//! A function on `K` splits across a two-set cover `{U, V}` once every
//! support simplex has its closed simplex inside `U` or inside `V`. One
//! barycentric subdivision always achieves this: a flag's closure lies in
//! an open set as soon as its smallest member does, and that member is a
//! face of every simplex of the flag.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charts::{cc, cc_local, intersect_zero_section_seeded, EmbeddedChart};
use crate::complex::{same_complex, OpenSet, Simplex, SimplicialComplex, SubdivisionMap};
use crate::constructible::{ConstructibleFunction, LocalFunction};
use crate::error::{Error, Result};
use crate::morse::{morse_evaluate, VertexOrder};
use crate::rational::{render, zero, Q};
use crate::sample;

/// Largest number of subdivisions [`mv_split`] attempts.
pub const SUBDIVISION_CAP: usize = 8;

/// Open sets whose union is the whole complex.
#[derive(Clone, Debug)]
pub struct OpenCover {
    complex: Arc<SimplicialComplex>,
    charts: Vec<OpenSet>,
}

impl OpenCover {
    pub fn new(complex: Arc<SimplicialComplex>, charts: Vec<OpenSet>) -> Result<Self> {
        for u in &charts {
            same_complex(&complex, u.complex())?;
        }
        if let Some(s) = complex
            .simplices()
            .iter()
            .find(|s| !charts.iter().any(|u| u.contains(s)))
        {
            return Err(Error::NotACover(s.clone()));
        }
        Ok(OpenCover { complex, charts })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn charts(&self) -> &[OpenSet] {
        &self.charts
    }
}

/// Output of [`mv_split`]; the pieces live on the subdivided complex.
#[derive(Clone, Debug)]
pub struct MvSplit {
    pub f_u: LocalFunction,
    pub f_v: LocalFunction,
    pub subdivision: SubdivisionMap,
}

impl MvSplit {
    /// `extend(f_U) + extend(f_V)`.
    pub fn reassemble(&self) -> Result<ConstructibleFunction> {
        self.f_u.extend_by_zero()?.add(&self.f_v.extend_by_zero()?)
    }
}

type Values = Vec<(Simplex, Q)>;

/// Each support simplex goes to `U` if its closure fits there, else to `V`;
/// `None` if some closure fits in neither.
fn assign(f: &ConstructibleFunction, u: &OpenSet, v: &OpenSet) -> Option<(Values, Values)> {
    let (mut in_u, mut in_v) = (Vec::new(), Vec::new());
    for (s, x) in f.support() {
        if u.contains_closure(s) {
            in_u.push((s.clone(), x.clone()));
        } else if v.contains_closure(s) {
            in_v.push((s.clone(), x.clone()));
        } else {
            return None;
        }
    }
    Some((in_u, in_v))
}

/// Split `f = extend(f_U) + extend(f_V)` after enough subdivision.
pub fn mv_split(f: &ConstructibleFunction, u: &OpenSet, v: &OpenSet) -> Result<MvSplit> {
    let k = f.complex();
    OpenCover::new(Arc::clone(k), vec![u.clone(), v.clone()])?;
    let mut sd = SubdivisionMap::identity(Arc::clone(k));
    loop {
        let fine = f.pullback_subdivision(&sd)?;
        let (u2, v2) = (u.refine(&sd)?, v.refine(&sd)?);
        if let Some((in_u, in_v)) = assign(&fine, &u2, &v2) {
            return Ok(MvSplit {
                f_u: LocalFunction::new(u2, in_u)?,
                f_v: LocalFunction::new(v2, in_v)?,
                subdivision: sd,
            });
        }
        if sd.depth() == SUBDIVISION_CAP {
            return Err(Error::SubdivisionCapExceeded(SUBDIVISION_CAP));
        }
        sd = sd.then(&sd.target().barycentric_subdivision())?;
    }
}

/// Counts from [`verify_mv_exactness`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MvReport {
    pub trials: usize,
    pub reassembled: usize,
    pub integral_additive: usize,
    pub pieces_compact: usize,
    pub agreeing_pairs: usize,
    pub preimages_found: usize,
    pub adversarial_cases: usize,
    pub adversarial_rejected: usize,
    pub failures: Vec<String>,
}

impl MvReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.reassembled == self.trials
            && self.integral_additive == self.trials
            && self.pieces_compact == self.trials
            && self.preimages_found == self.agreeing_pairs
            && self.adversarial_rejected == self.adversarial_cases
    }
}

/// Surjectivity and middle exactness of
/// `Fun_c(U∩V) → Fun_c(U) ⊕ Fun_c(V) → Fun_c(K)` on random inputs.
pub fn verify_mv_exactness(
    k: &Arc<SimplicialComplex>,
    u: &OpenSet,
    v: &OpenSet,
    trials: usize,
    seed: u64,
) -> Result<MvReport> {
    OpenCover::new(Arc::clone(k), vec![u.clone(), v.clone()])?;
    let w = u.intersection(v)?;
    let w_core = w.compact_core();
    let u_core = u.compact_core();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = MvReport {
        trials,
        ..MvReport::default()
    };
    for t in 0..trials {
        let f = sample::function(k, &mut rng);
        let split = mv_split(&f, u, v)?;
        let fine = f.pullback_subdivision(&split.subdivision)?;
        if split.reassemble()? == fine {
            r.reassembled += 1;
        } else {
            r.failures.push(format!("trial {t}: reassembly differs"));
        }
        if split.f_u.euler_integral() + split.f_v.euler_integral() == f.euler_integral() {
            r.integral_additive += 1;
        } else {
            r.failures.push(format!("trial {t}: integral not additive"));
        }
        if split.f_u.is_compactly_supported() && split.f_v.is_compactly_supported() {
            r.pieces_compact += 1;
        }

        // a pair (a, b) ∈ Fun_c(U) ⊕ Fun_c(V) with equal extensions; half the
        // time drawn from Fun_c(U∩V), half from Fun_c(U) at large
        let pool = if t % 2 == 0 { &w_core } else { &u_core };
        let a = LocalFunction::new(u.clone(), sample::values_on(pool, &mut rng))?;
        let b = LocalFunction::new(
            v.clone(),
            a.support()
                .iter()
                .filter(|(s, _)| v.contains(s))
                .map(|(s, x)| (s.clone(), x.clone())),
        )?;
        if b.support().len() == a.support().len() && b.is_compactly_supported() {
            r.agreeing_pairs += 1;
            let pre = LocalFunction::new(w.clone(), a.support().clone());
            match pre {
                Ok(pre) if pre.is_compactly_supported() && pre.extend_to(u)? == a && pre.extend_to(v)? == b => {
                    r.preimages_found += 1
                }
                _ => r
                    .failures
                    .push(format!("trial {t}: agreeing pair without a preimage in U∩V")),
            }
        }
    }

    // supports touching the frontier of U∩V are not in Fun_c(U∩V)
    for s in w.members().iter().filter(|s| !w.contains_closure(s)) {
        r.adversarial_cases += 1;
        let f = LocalFunction::new(w.clone(), [(s.clone(), crate::rational::one())])?;
        if matches!(f.extend_by_zero(), Err(Error::SupportNotRelativelyCompact { .. })) {
            r.adversarial_rejected += 1;
        } else {
            r.failures
                .push(format!("{s} touches the frontier of U∩V but was accepted"));
        }
    }
    Ok(r)
}

/// Counts from [`localized_index_verify`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LocalizedReport {
    pub trials: usize,
    /// `∫f = morse(f, u) = ∩ζ(cc f)`.
    pub index_agreements: usize,
    /// `cc` of the extension equals the extension of the local `cc`.
    pub cc_local_agreements: usize,
    /// `∫` and `∩ζ∘cc` add across a split of a global function.
    pub additivity_agreements: usize,
    pub failures: Vec<String>,
    /// First few `(∫, morse, ∩ζ)` triples.
    pub samples: Vec<[String; 3]>,
}

impl LocalizedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.index_agreements == self.trials
            && self.cc_local_agreements == self.trials
            && self.additivity_agreements == self.trials
    }
}

/// Index formula on random functions compactly supported in `u`, plus
/// additivity across the cover `{u, partner}` (default: the open star of
/// the complement of `u`).
pub fn localized_index_verify(
    chart: &Arc<EmbeddedChart>,
    u: &OpenSet,
    partner: Option<&OpenSet>,
    trials: usize,
    seed: u64,
) -> Result<LocalizedReport> {
    let k = chart.complex();
    same_complex(k, u.complex())?;
    let v = partner.cloned().unwrap_or_else(|| u.complement_star());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fine_charts: BTreeMap<usize, Arc<EmbeddedChart>> = BTreeMap::new();
    let mut r = LocalizedReport {
        trials,
        ..LocalizedReport::default()
    };
    for t in 0..trials {
        let local = sample::local_function(u, &mut rng);
        let f = local.extend_by_zero()?;
        let integral = f.euler_integral();
        let morse = morse_evaluate(&f, &VertexOrder::random(k, &mut rng))?;
        let table = cc(&f, chart)?;
        let cov_seed = rand::Rng::gen(&mut rng);
        let meet = intersect_zero_section_seeded(&table, cov_seed)?;
        if integral == morse && morse == meet {
            r.index_agreements += 1;
        } else {
            r.failures.push(format!(
                "trial {t}: ∫ = {}, morse = {}, ∩ζ = {}",
                render(&integral),
                render(&morse),
                render(&meet)
            ));
        }
        if r.samples.len() < 5 {
            r.samples.push([render(&integral), render(&morse), render(&meet)]);
        }
        if cc_local(&local, chart)? == *table.entries() {
            r.cc_local_agreements += 1;
        } else {
            r.failures.push(format!("trial {t}: local cc differs from global cc"));
        }

        let g = sample::function(k, &mut rng);
        let split = mv_split(&g, u, &v)?;
        let depth = split.subdivision.depth();
        let fine = match fine_charts.get(&depth) {
            Some(c) => Arc::clone(c),
            None => {
                let c = Arc::new(chart.subdivide(&split.subdivision)?);
                fine_charts.insert(depth, Arc::clone(&c));
                c
            }
        };
        let whole = g.pullback_subdivision(&split.subdivision)?;
        let mut sum_meet = zero();
        let mut sum_int = zero();
        for piece in [&split.f_u, &split.f_v] {
            let ext = piece.extend_by_zero()?;
            sum_meet += intersect_zero_section_seeded(&cc(&ext, &fine)?, cov_seed)?;
            sum_int += ext.euler_integral();
        }
        let total = intersect_zero_section_seeded(&cc(&whole, &fine)?, cov_seed)?;
        if sum_meet == total && sum_int == g.euler_integral() && total == sum_int {
            r.additivity_agreements += 1;
        } else {
            r.failures.push(format!("trial {t}: split pieces do not add up"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, q};

    fn s(v: &[i64]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn circle_arcs() {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1], [1, 2], [0, 2]]).unwrap());
        let u = OpenSet::star_of(Arc::clone(&k), [s(&[0]), s(&[1])]).unwrap();
        let v = OpenSet::star_of(Arc::clone(&k), [s(&[1]), s(&[2])]).unwrap();
        let f = ConstructibleFunction::constant(Arc::clone(&k), one());
        let split = mv_split(&f, &u, &v).unwrap();
        assert_eq!(split.f_u.euler_integral() + split.f_v.euler_integral(), zero());
        assert_eq!(
            split.reassemble().unwrap(),
            f.pullback_subdivision(&split.subdivision).unwrap()
        );
        let r = verify_mv_exactness(&k, &u, &v, 30, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.adversarial_cases > 0);
    }

    #[test]
    fn already_inside_the_overlap() {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1], [1, 2]]).unwrap());
        let u = k.star_open(&s(&[1])).unwrap();
        let v = OpenSet::whole(Arc::clone(&k));
        let f = ConstructibleFunction::new(Arc::clone(&k), [(s(&[1]), q(3))]).unwrap();
        let split = mv_split(&f, &u, &v).unwrap();
        assert_eq!(split.subdivision.depth(), 0);
        assert_eq!(split.f_u.extend_by_zero().unwrap(), f);
        assert!(split.f_v.support().is_empty());
    }

    #[test]
    fn interval_needs_one_subdivision() {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1]]).unwrap());
        let u = k.star_open(&s(&[0])).unwrap();
        let v = k.star_open(&s(&[1])).unwrap();
        let f = ConstructibleFunction::constant(Arc::clone(&k), one());
        let split = mv_split(&f, &u, &v).unwrap();
        assert_eq!(split.subdivision.depth(), 1);
        assert_eq!(split.f_u.euler_integral() + split.f_v.euler_integral(), one());
    }

    #[test]
    fn not_a_cover() {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1], [1, 2]]).unwrap());
        let u = k.star_open(&s(&[0])).unwrap();
        let f = ConstructibleFunction::zero(Arc::clone(&k));
        assert_eq!(mv_split(&f, &u, &u).unwrap_err(), Error::NotACover(s(&[1])));
    }

    #[test]
    fn localized_on_a_fan() {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]]).unwrap());
        let chart = Arc::new(
            EmbeddedChart::from_integer_coords(
                Arc::clone(&k),
                2,
                &[(0, &[0, 0]), (1, &[2, 0]), (2, &[0, 2]), (3, &[-2, 0]), (4, &[0, -2])],
            )
            .unwrap(),
        );
        let u = k.star_open(&s(&[0])).unwrap();
        let r = localized_index_verify(&chart, &u, None, 20, 11).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
