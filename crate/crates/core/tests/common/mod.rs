#![allow(dead_code)]

use std::collections::BTreeSet;

use pfdual::algebra::{self, FinAlgebra, Homomorphism};
use pfdual::pfun::{self, Base, PFunc};
use pfdual::samples;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RANDOM_SEED: u64 = 0x5eed_2024;
pub const RANDOM_SETS: usize = 24;

/// A named algebra together with the partial functions behind it, if any.
pub struct Instance {
    pub label: String,
    pub algebra: FinAlgebra,
    pub functions: Option<Vec<PFunc>>,
}

fn closed_instance(label: String, gens: &[PFunc]) -> Instance {
    let closed = pfun::close_under_ops(gens).expect("nonempty generators on one base");
    let (algebra, functions) = pfun::as_abstract(&closed, None).expect("closure is closed");
    Instance {
        label,
        algebra,
        functions: Some(functions),
    }
}

/// One instance per nonempty subset of the nine partial functions on a
/// two-point base, in bitmask order. Several subsets generate the same
/// subalgebra.
pub fn pf2_generated() -> Vec<Instance> {
    let base = Base::numbered(2);
    let all = pfun::enumerate_all(&base).unwrap();
    assert_eq!(all.len(), 9);
    (1u32..(1 << 9))
        .map(|mask| {
            let gens: Vec<PFunc> = (0..9)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| all[i].clone())
                .collect();
            closed_instance(format!("pf2 gens {mask:#05x}"), &gens)
        })
        .collect()
}

/// The distinct subalgebras among `pf2_generated`.
pub fn pf2_subalgebras() -> Vec<Instance> {
    let mut seen: BTreeSet<Vec<PFunc>> = BTreeSet::new();
    let mut out = Vec::new();
    for inst in pf2_generated() {
        let mut key = inst.functions.clone().unwrap();
        key.sort();
        if seen.insert(key) {
            out.push(inst);
        }
    }
    out
}

/// Subalgebras of PF(3) generated by one to three random functions.
pub fn pf3_random() -> Vec<Instance> {
    let base = Base::numbered(3);
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    (0..RANDOM_SETS)
        .map(|i| {
            let k = rng.random_range(1..=3);
            let gens: Vec<PFunc> = (0..k)
                .map(|_| {
                    let graph = (0..3)
                        .map(|_| {
                            let v = rng.random_range(0..4usize);
                            (v < 3).then_some(v)
                        })
                        .collect();
                    PFunc::from_graph(&base, graph)
                })
                .collect();
            closed_instance(format!("pf3 random #{i}"), &gens)
        })
        .collect()
}

pub fn named_instances() -> Vec<Instance> {
    let (_, ex1_fs) = samples::ex1_functions();
    vec![
        Instance {
            label: "ex1".into(),
            algebra: samples::ex1(),
            functions: Some(ex1_fs.clone()),
        },
        Instance {
            label: "ex1b".into(),
            algebra: samples::ex1b(),
            functions: Some(ex1_fs[..6].to_vec()),
        },
        Instance {
            label: "one element".into(),
            algebra: samples::one_element(),
            functions: None,
        },
    ]
}

/// Named instances, distinct PF(2) subalgebras and random PF(3) subalgebras.
pub fn corpus() -> Vec<Instance> {
    let mut out = named_instances();
    out.extend(pf2_subalgebras());
    out.extend(pf3_random());
    out
}

/// A small corpus for the more expensive checks.
pub fn small_corpus() -> Vec<Instance> {
    let mut out = named_instances();
    out.extend(pf2_subalgebras());
    out
}

/// Identities, inclusions between PF(2) subalgebras, the Ex1B inclusion and
/// every homomorphism between small pairs of named instances.
pub fn corpus_homs() -> Vec<(String, Homomorphism)> {
    let mut out = Vec::new();
    for inst in named_instances() {
        out.push((
            format!("id {}", inst.label),
            Homomorphism::identity(inst.algebra.clone()),
        ));
    }
    out.push(("ex1b into ex1".into(), samples::ex1b_inclusion()));
    let subs = pf2_subalgebras();
    let full = subs.iter().max_by_key(|i| i.algebra.len()).expect("nonempty corpus");
    for inst in &subs {
        out.push((
            format!("id {}", inst.label),
            Homomorphism::identity(inst.algebra.clone()),
        ));
        if let Ok(h) = Homomorphism::inclusion(inst.algebra.clone(), full.algebra.clone()) {
            out.push((format!("{} into pf2", inst.label), h));
        }
    }
    let named = named_instances();
    for a in &named {
        for b in &named {
            for (k, map) in algebra::enumerate_homomorphisms(&a.algebra, &b.algebra)
                .into_iter()
                .enumerate()
            {
                let h = Homomorphism::new(a.algebra.clone(), b.algebra.clone(), map).unwrap();
                out.push((format!("{} to {} #{k}", a.label, b.label), h));
            }
        }
    }
    for a in subs.iter().filter(|i| i.algebra.len() <= 5) {
        for b in subs.iter().filter(|i| i.algebra.len() <= 5) {
            for (k, map) in algebra::enumerate_homomorphisms(&a.algebra, &b.algebra)
                .into_iter()
                .enumerate()
                .take(4)
            {
                let h = Homomorphism::new(a.algebra.clone(), b.algebra.clone(), map).unwrap();
                out.push((format!("{} to {} #{k}", a.label, b.label), h));
            }
        }
    }
    out
}
