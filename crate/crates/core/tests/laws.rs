//! Property tests for the concrete operations and library invariants.

use std::sync::Arc;

use pfdual::axioms::{self, Axiom};
use pfdual::pfun::{self, Base, Concrete, PFunc};
use pfdual::samples;
use pfdual::topcat::{self, FinTopology};
use pfdual::transducer::{self, Transducer, Transition};
use pfdual::Subset;
use proptest::prelude::*;

fn base_and_funcs(k: usize) -> impl Strategy<Value = (Arc<Base>, Vec<PFunc>)> {
    (1usize..=3).prop_flat_map(move |n| {
        let graph = proptest::collection::vec(proptest::option::of(0..n), n);
        proptest::collection::vec(graph, k).prop_map(move |gs| {
            let base = Base::numbered(n);
            let fs = gs.into_iter().map(|g| PFunc::from_graph(&base, g)).collect();
            (base, fs)
        })
    })
}

proptest! {
    #[test]
    fn axioms_hold_for_partial_functions((_, fs) in base_and_funcs(3)) {
        for axiom in Axiom::ALL {
            let args = &fs[..axiom.arity()];
            prop_assert!(axiom.holds_at(&Concrete, args), "{axiom} fails at {fs:?}");
        }
    }

    #[test]
    fn pref_union_is_associative((_, fs) in base_and_funcs(3)) {
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        let left = pfun::pref_union(&pfun::pref_union(f, g).unwrap(), h).unwrap();
        let right = pfun::pref_union(f, &pfun::pref_union(g, h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn compatible_functions_join_both_ways((_, fs) in base_and_funcs(2)) {
        let (f, g) = (&fs[0], &fs[1]);
        if pfun::compatible(f, g).unwrap() {
            let j = pfun::join_compatible(f, g).unwrap();
            prop_assert_eq!(&j, &pfun::pref_union(f, g).unwrap());
            prop_assert_eq!(&j, &pfun::pref_union(g, f).unwrap());
        }
    }

    #[test]
    fn order_is_graph_inclusion((_, fs) in base_and_funcs(2)) {
        let (f, g) = (&fs[0], &fs[1]);
        let by_graph = f.graph().iter().zip(g.graph()).all(|(a, b)| a.is_none() || a == b);
        let by_definition = pfun::compose(&pfun::domain(f), g).unwrap() == *f;
        prop_assert_eq!(pfun::leq(f, g).unwrap(), by_graph);
        prop_assert_eq!(by_definition, by_graph);
    }

    #[test]
    fn closures_are_closed_and_pass_the_axioms((_, fs) in base_and_funcs(2)) {
        let closed = pfun::close_under_ops(&fs).unwrap();
        let (alg, _) = pfun::as_abstract(&closed, None).unwrap();
        prop_assert!(alg.check_axioms().all_pass());
        for f in &fs {
            prop_assert!(closed.contains(f));
        }
    }

    #[test]
    fn subset_algebra(xs in proptest::collection::vec(0usize..12, 0..12), ys in proptest::collection::vec(0usize..12, 0..12)) {
        let a = Subset::from_iter(12, xs.iter().copied());
        let b = Subset::from_iter(12, ys.iter().copied());
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersection(&b.complement()));
        prop_assert_eq!(a.difference(&b), a.intersection(&b.complement()));
        prop_assert!(a.intersection(&b).is_subset(&a));
        prop_assert_eq!(a.is_disjoint(&b), a.intersection(&b).is_empty());
        prop_assert_eq!(a.len() + b.len(), a.union(&b).len() + a.intersection(&b).len());
    }

    #[test]
    fn generated_topologies_are_topologies(
        subbasis in proptest::collection::vec(proptest::collection::vec(0usize..5, 0..5), 0..5),
    ) {
        let sets: Vec<Subset> = subbasis.iter().map(|s| Subset::from_iter(5, s.iter().copied())).collect();
        let t = FinTopology::generate(5, &sets);
        let opens = t.opens();
        prop_assert!(topcat::is_topology(5, &opens));
        for s in &sets {
            prop_assert!(t.is_open(s));
        }
        for x in 0..5 {
            let smallest = opens.iter().filter(|u| u.contains(x)).fold(Subset::full(5), |acc, u| acc.intersection(u));
            prop_assert_eq!(t.nbhd(x), &smallest);
        }
        prop_assert_eq!(FinTopology::from_opens(5, &opens).unwrap(), t.clone());
        for u in t.clopens() {
            prop_assert!(t.is_open(&u) && t.is_open(&u.complement()));
        }
    }
}

/// Sequential transducers: at most one transition per state and letter, so
/// every generated machine is functional.
fn sequential_transducer() -> impl Strategy<Value = Transducer> {
    (1usize..=3).prop_flat_map(|n| {
        let out = proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..3);
        let cell = proptest::option::of((out, 0..n));
        let cells = proptest::collection::vec(cell, n * 2);
        let finals = proptest::collection::vec(
            proptest::option::of(proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..2)),
            n,
        );
        (cells, finals).prop_map(move |(cells, finals)| {
            let mut trans = Vec::new();
            for (i, c) in cells.into_iter().enumerate() {
                if let Some((o, to)) = c {
                    let letter = if i % 2 == 0 { 'a' } else { 'b' };
                    let o: String = o.into_iter().collect();
                    trans.push(Transition::new(i / 2, letter, &o, to));
                }
            }
            let fin = finals
                .into_iter()
                .enumerate()
                .filter_map(|(q, w)| w.map(|w| (q, w.into_iter().collect())))
                .collect();
            let states = (0..n).map(|i| format!("s{i}")).collect();
            Transducer::new(vec!['a', 'b'], states, 0, trans, fin).unwrap()
        })
    })
}

const L: usize = 5;

fn words() -> Vec<String> {
    transducer::words_up_to(&['a', 'b'], L)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_two_step_evaluation(t in sequential_transducer(), u in sequential_transducer()) {
        let c = transducer::compose(&t, &u).unwrap();
        for w in words() {
            let two_step = match t.eval(&w).unwrap() {
                Some(v) => u.eval(&v).unwrap(),
                None => None,
            };
            prop_assert_eq!(c.eval(&w).unwrap(), two_step, "at {:?}", w);
        }
    }

    #[test]
    fn antidomain_is_identity_off_the_domain(t in sequential_transducer()) {
        let a = transducer::antidomain(&t);
        let d = transducer::domain_dfa(&t);
        for w in words() {
            let defined = t.eval(&w).unwrap().is_some();
            prop_assert_eq!(a.eval(&w).unwrap(), (!defined).then(|| w.clone()));
            prop_assert_eq!(d.accepts(&w).unwrap(), defined);
        }
    }

    #[test]
    fn range_accepts_outputs(t in sequential_transducer()) {
        let r = transducer::range_dfa(&t);
        // outputs grow by at most two letters per input letter plus one final
        let outputs: Vec<String> = transducer::words_up_to(&['a', 'b'], 3)
            .iter()
            .filter_map(|w| t.eval(w).unwrap())
            .collect();
        for o in &outputs {
            prop_assert!(r.accepts(o).unwrap(), "{o:?} missing");
        }
        let rt = transducer::range(&t);
        for o in &outputs {
            prop_assert_eq!(rt.eval(o).unwrap(), Some(o.clone()));
        }
    }

    #[test]
    fn pref_union_is_the_case_split(t in sequential_transducer(), u in sequential_transducer()) {
        let p = transducer::pref_union(&t, &u).unwrap();
        for w in words() {
            let expected = t.eval(&w).unwrap().or(u.eval(&w).unwrap());
            prop_assert_eq!(p.eval(&w).unwrap(), expected, "at {:?}", w);
        }
    }

    #[test]
    fn trimming_preserves_the_function(t in sequential_transducer()) {
        let trimmed = t.trim();
        prop_assert!(trimmed.num_states() <= t.num_states());
        prop_assert_eq!(transducer::equiv_bounded(&t, &trimmed, L).unwrap(), None);
    }
}

#[test]
fn bounded_equations_hold_for_sample_transducers() {
    let ts = vec![samples::t1(), samples::t2(), Transducer::identity(vec!['a', 'b'])];
    let report = transducer::axioms_bounded(&ts, 4).unwrap();
    assert!(report.equations_pass(), "{:?}", report.failures().collect::<Vec<_>>());
    assert!(axioms::check_all(&Concrete, &pfun::enumerate_all(&Base::numbered(2)).unwrap()).all_pass());
}
