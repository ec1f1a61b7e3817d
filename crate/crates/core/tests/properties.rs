use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbindex::charts::{cc, cc_inverse, cc_local, in_normal_cone, intersect_zero_section, EmbeddedChart};
use orbindex::complex::{euler_char_cc, OpenSet, Simplex, SimplicialComplex};
use orbindex::constructible::ConstructibleFunction;
use orbindex::cosheaf::mv_split;
use orbindex::fixtures;
use orbindex::morse::{local_index, morse_evaluate, VertexOrder};
use orbindex::orbifold::{
    average, class_of, coarse_weighted_integral, equivariant_table_action, orbifold_integral, pushforward_p, quotient,
    regularize, transfer, verify_p_iso, GroupAction,
};
use orbindex::rational::{one, q, Q};
use orbindex::sample;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(r: &mut ChaCha8Rng) -> Arc<SimplicialComplex> {
    let n = r.gen_range(1..=7);
    let m = r.gen_range(0..=6);
    Arc::new(sample::complex(n, 3, m, r))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// A random finite action made regular: either `Z/m` cycling disjoint
/// copies of a random complex (optionally coned off to a fixed apex), or
/// the orbit closure of random simplices under a random permutation,
/// regularized by subdivision.
fn regular_action(r: &mut ChaCha8Rng) -> Arc<GroupAction> {
    if r.gen_bool(0.5) {
        let n = r.gen_range(1..=4) as i64;
        let m = r.gen_range(2..=3) as i64;
        let base = sample::complex(n as usize, 1, r.gen_range(0..=3), r);
        let cone = r.gen_bool(0.5);
        let apex = n * m;
        let mut maximal = Vec::new();
        for c in 0..m {
            for s in base.maximal_simplices() {
                let mut v: Vec<i64> = s.vertices().iter().map(|x| x + c * n).collect();
                if cone {
                    v.push(apex);
                }
                maximal.push(v);
            }
        }
        let k = Arc::new(SimplicialComplex::from_maximal(maximal).unwrap());
        let mut g: BTreeMap<i64, i64> = (0..n * m).map(|v| (v, (v + n) % (n * m))).collect();
        if cone {
            g.insert(apex, apex);
        }
        Arc::new(GroupAction::new(k, &[g]).unwrap())
    } else {
        let n = r.gen_range(2..=5);
        let mut perm: Vec<i64> = (0..n as i64).collect();
        perm.shuffle(r);
        let g: BTreeMap<i64, i64> = (0..n as i64).zip(perm.iter().copied()).collect();
        let mut maximal: Vec<Vec<i64>> = (0..n as i64).map(|v| vec![v]).collect();
        for _ in 0..r.gen_range(0..=2) {
            let size = r.gen_range(2..=3.min(n));
            let start: Vec<i64> = (0..n as i64)
                .collect::<Vec<_>>()
                .choose_multiple(r, size)
                .copied()
                .collect();
            let mut s = start.clone();
            loop {
                maximal.push(s.clone());
                s = s.iter().map(|v| g[v]).collect();
                if s == start {
                    break;
                }
            }
        }
        let k = Arc::new(SimplicialComplex::from_maximal(maximal).unwrap());
        let action = Arc::new(GroupAction::new(k, &[g]).unwrap());
        regularize(&action).unwrap().action
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn euler_characteristic_survives_subdivision(seed in any::<u64>(), depth in 1usize..=2) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let mut sd = k.barycentric_subdivision();
        for _ in 1..depth {
            sd = sd.then(&sd.target().barycentric_subdivision()).unwrap();
        }
        prop_assert_eq!(euler_char_cc(k.simplices()), euler_char_cc(sd.target().simplices()));
    }

    #[test]
    fn links_and_stars_are_closed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        for s in k.simplices() {
            let link = k.link(s).unwrap();
            for t in link.simplices() {
                prop_assert!(t.is_disjoint(s));
                prop_assert!(k.contains(&s.join(t)));
                for f in t.faces() {
                    prop_assert!(link.contains(&f));
                }
            }
            let star = k.star_open(s).unwrap();
            prop_assert!(star.contains(s));
            for t in star.members() {
                prop_assert!(s.is_face_of(t));
                for c in k.cofaces(t) {
                    prop_assert!(star.contains(c));
                }
            }
        }
    }

    #[test]
    fn carriers_partition_the_subdivision(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let sd = k.barycentric_subdivision();
        let sd = sd.then(&sd.target().barycentric_subdivision()).unwrap();
        prop_assert_eq!(sd.carriers().len(), sd.target().len());
        let mut counts: BTreeMap<&Simplex, Q> = BTreeMap::new();
        for t in sd.target().simplices() {
            let c = sd.carrier(t);
            prop_assert!(k.contains(c));
            prop_assert!(t.dim() <= c.dim());
            *counts.entry(c).or_insert_with(Q::zero) += orbindex::rational::parity(t.dim());
        }
        // each open simplex is subdivided into an open cell of the same χ_c
        for s in k.simplices() {
            prop_assert_eq!(&counts[s], &orbindex::rational::parity(s.dim()));
        }
    }

    #[test]
    fn integral_algorithms_agree_and_are_linear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let f = sample::function(&k, &mut r);
        let g = sample::function(&k, &mut r);
        let (a, b) = (sample::rational(&mut r), sample::rational(&mut r));
        prop_assert_eq!(f.euler_integral(), f.euler_integral_by_level_sets());
        let combo = f.scale(&a).add(&g.scale(&b)).unwrap();
        prop_assert_eq!(combo.euler_integral(), &a * f.euler_integral() + &b * g.euler_integral());
        prop_assert_eq!(combo.euler_integral(), combo.euler_integral_by_level_sets());
    }

    #[test]
    fn disjoint_supports_add(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let f = sample::function(&k, &mut r);
        let (left, right): (Vec<_>, Vec<_>) = f.support().iter().map(|(s, v)| (s.clone(), v.clone())).partition(|_| r.gen_bool(0.5));
        let f1 = ConstructibleFunction::new(Arc::clone(&k), left).unwrap();
        let f2 = ConstructibleFunction::new(Arc::clone(&k), right).unwrap();
        prop_assert_eq!(f1.add(&f2).unwrap().euler_integral(), f1.euler_integral() + f2.euler_integral());
    }

    #[test]
    fn extension_by_zero_keeps_the_integral(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let u = OpenSet::star_of(Arc::clone(&k), sample::vertex_subset(&k, &mut r).into_iter().map(Simplex::vertex)).unwrap();
        let f = sample::local_function(&u, &mut r);
        prop_assert!(f.is_compactly_supported());
        prop_assert_eq!(f.extend_by_zero().unwrap().euler_integral(), f.euler_integral());
    }

    #[test]
    fn morse_sum_is_order_independent_and_linear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let f = sample::function(&k, &mut r);
        let g = sample::function(&k, &mut r);
        let a = sample::rational(&mut r);
        let integral = f.euler_integral();
        for _ in 0..10 {
            let u = VertexOrder::random(&k, &mut r);
            prop_assert_eq!(morse_evaluate(&f, &u).unwrap(), integral.clone());
            let combo = f.add(&g.scale(&a)).unwrap();
            prop_assert_eq!(
                morse_evaluate(&combo, &u).unwrap(),
                morse_evaluate(&f, &u).unwrap() + &a * morse_evaluate(&g, &u).unwrap()
            );
            for v in k.vertices() {
                prop_assert_eq!(
                    local_index(&combo, *v, &u).unwrap(),
                    local_index(&f, *v, &u).unwrap() + &a * local_index(&g, *v, &u).unwrap()
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn intersection_is_covector_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = fixtures::planar_grid(2, &mut r);
        let f = sample::function(chart.complex(), &mut r);
        let t = cc(&f, &chart).unwrap();
        let first = intersect_zero_section(&t, Some(&chart.generic_covector(r.gen()))).unwrap();
        prop_assert_eq!(&first, &f.euler_integral());
        for _ in 0..9 {
            let xi = chart.generic_covector(r.gen());
            prop_assert_eq!(&intersect_zero_section(&t, Some(&xi)).unwrap(), &first);
        }
    }

    #[test]
    fn cc_is_linear_injective_and_invertible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = fixtures::planar_grid(2, &mut r);
        let k = chart.complex();
        let f = sample::function(k, &mut r);
        let g = sample::function(k, &mut r);
        let a = sample::rational(&mut r);
        let (tf, tg) = (cc(&f, &chart).unwrap(), cc(&g, &chart).unwrap());
        let sum = tf.add(&tg.scale(&a)).unwrap();
        let fg = f.add(&g.scale(&a)).unwrap();
        let direct = cc(&fg, &chart).unwrap();
        prop_assert_eq!(direct.entries(), sum.entries());
        prop_assert_eq!(cc_inverse(&sum).unwrap(), fg.clone());
        prop_assert_eq!(tf.is_zero(), f.is_zero());
        prop_assert!(cc(&f.sub(&f).unwrap(), &chart).unwrap().is_zero());
    }

    #[test]
    fn vertex_multiplicities_are_local_indices(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = fixtures::planar_grid(2, &mut r);
        let f = sample::function(chart.complex(), &mut r);
        let t = cc(&f, &chart).unwrap();
        let xi = chart.generic_covector(r.gen());
        let u = chart.check_generic(&xi).unwrap();
        for v in chart.complex().vertices() {
            let s = Simplex::vertex(*v);
            let e = chart.chambers(&s).unwrap().signs_of(&chart, &xi).unwrap();
            prop_assert_eq!(t.get(&s, &e), local_index(&f, *v, &u).unwrap());
        }
    }

    #[test]
    fn random_simplices_have_normal_cycles(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let k = Arc::new(SimplicialComplex::from_maximal([(0..=d as i64).collect::<Vec<_>>()]).unwrap());
        let chart = loop {
            let coords: BTreeMap<i64, Vec<Q>> = (0..=d as i64)
                .map(|v| (v, (0..d).map(|_| q(r.gen_range(-5..=5))).collect()))
                .collect();
            if let Ok(c) = EmbeddedChart::new(Arc::clone(&k), d, coords) {
                break Arc::new(c);
            }
        };
        let t = cc(&ConstructibleFunction::constant(Arc::clone(&k), one()), &chart).unwrap();
        let poly: Vec<Vec<Q>> = chart.coords().values().cloned().collect();
        for s in k.simplices() {
            let b = chart.barycenter(s);
            for c in &chart.chambers(s).unwrap().chambers {
                let want = if in_normal_cone(&poly, &b, &c.witness) { one() } else { Q::zero() };
                prop_assert_eq!(t.get(s, &c.signs), want);
            }
        }
    }

    #[test]
    fn mayer_vietoris_split_reassembles(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r);
        let a = sample::vertex_subset(&k, &mut r);
        let b: Vec<Simplex> = k.vertices().iter().filter(|v| !a.contains(v) || r.gen_bool(0.3)).map(|v| Simplex::vertex(*v)).collect();
        let u = OpenSet::star_of(Arc::clone(&k), a.iter().map(|v| Simplex::vertex(*v))).unwrap();
        let v = OpenSet::star_of(Arc::clone(&k), b).unwrap();
        let f = sample::function(&k, &mut r);
        let split = mv_split(&f, &u, &v).unwrap();
        prop_assert!(split.f_u.is_compactly_supported() && split.f_v.is_compactly_supported());
        prop_assert_eq!(split.reassemble().unwrap(), f.pullback_subdivision(&split.subdivision).unwrap());
        prop_assert_eq!(split.f_u.euler_integral() + split.f_v.euler_integral(), f.euler_integral());
    }

    #[test]
    fn cc_commutes_with_extension_by_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = fixtures::planar_grid(2, &mut r);
        let k = chart.complex();
        let u = OpenSet::star_of(Arc::clone(k), sample::vertex_subset(k, &mut r).into_iter().map(Simplex::vertex)).unwrap();
        let f = sample::local_function(&u, &mut r);
        let global = cc(&f.extend_by_zero().unwrap(), &chart).unwrap();
        let local: BTreeMap<_, _> = cc_local(&f, &chart).unwrap().into_iter().filter(|(_, m)| !m.is_zero()).collect();
        prop_assert_eq!(global.entries(), &local);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn orbifold_invariants_on_random_regular_actions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let action = regular_action(&mut r);
        let k = action.complex();
        let qd = quotient(&action).unwrap();
        let order = action.order();

        for cs in qd.coarse().simplices() {
            let fiber = qd.fiber(cs).unwrap();
            prop_assert_eq!(fiber.len() * qd.stabilizer_order(&fiber[0]).unwrap(), order);
        }
        prop_assert!(verify_p_iso(&action, &qd).unwrap().invertible);

        let h = sample::function(k, &mut r);
        let c = class_of(&h, &action).unwrap();
        prop_assert_eq!(orbifold_integral(&c), coarse_weighted_integral(&c, &qd).unwrap());

        // h and h + (g·w - w) share an average, hence an integral
        let w = sample::function(k, &mut r);
        let g = r.gen_range(0..order);
        let h2 = h.add(&action.act(g, &w).unwrap().sub(&w).unwrap()).unwrap();
        let c2 = class_of(&h2, &action).unwrap();
        prop_assert_eq!(c2.average(), c.average());
        prop_assert_eq!(orbifold_integral(&c2), orbifold_integral(&c));

        let pulled = transfer(&pushforward_p(&c, &qd).unwrap(), &qd).unwrap();
        prop_assert_eq!(pulled, average(&h, &action).unwrap().scale(&q(order as i64)));
    }

    #[test]
    fn intersection_is_constant_on_orbits(seed in any::<u64>(), which in 0usize..3) {
        let mut r = rng(seed);
        let (_, eq) = fixtures::equivariant_charts().swap_remove(which);
        let (eq, reg) = eq.regularize().unwrap();
        let h = sample::function(reg.action.complex(), &mut r);
        let t = cc(&h, eq.chart()).unwrap();
        let xi = eq.chart().generic_covector(r.gen());
        let base = intersect_zero_section(&t, Some(&xi)).unwrap();
        for g in 0..reg.action.order() {
            let moved = equivariant_table_action(g, &t, &eq).unwrap();
            prop_assert_eq!(intersect_zero_section(&moved, Some(&xi)).unwrap(), base.clone());
            let direct = cc(&reg.action.act(g, &h).unwrap(), eq.chart()).unwrap();
            prop_assert_eq!(moved.entries(), direct.entries());
        }
    }
}
