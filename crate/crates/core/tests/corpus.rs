//! Structural invariants checked over the whole corpus of small algebras.

mod common;

use common::{corpus, corpus_homs, small_corpus};
use pfdual::algebra::{self, Representable};
use pfdual::duality::{self, phi, theta};
use pfdual::dualize::{self, pf_object};
use pfdual::filters::{self, FilterSet, Generated};
use pfdual::samples;
use pfdual::sections::{self, seccl_object, Section};
use pfdual::topcat::{self, TopCategory};
use pfdual::Subset;

#[test]
fn corpus_passes_axioms_and_theta_is_an_isomorphism() {
    let all = corpus();
    assert!(all.len() > 3 + 20);
    for inst in &all {
        let report = inst.algebra.check_axioms();
        assert!(
            report.all_pass(),
            "{}: {:?}",
            inst.label,
            report.failures().collect::<Vec<_>>()
        );
        let t = theta(&inst.algebra).unwrap_or_else(|e| panic!("{}: {e}", inst.label));
        assert!(t.iso.verify().passed(), "{}", inst.label);
        assert_eq!(t.sections.algebra.len(), inst.algebra.len());
    }
}

#[test]
fn concrete_tables_agree_with_the_functions() {
    use pfdual::pfun;
    for inst in corpus() {
        let Some(fs) = &inst.functions else { continue };
        let alg = &inst.algebra;
        let at = |f: &pfdual::pfun::PFunc| fs.iter().position(|g| g == f).unwrap();
        for a in alg.elements() {
            assert_eq!(alg.antidomain(a), at(&pfun::antidomain(&fs[a])));
            assert_eq!(alg.range(a), at(&pfun::range(&fs[a])));
            for b in alg.elements() {
                assert_eq!(alg.compose(a, b), at(&pfun::compose(&fs[a], &fs[b]).unwrap()));
                assert_eq!(alg.pref(a, b), at(&pfun::pref_union(&fs[a], &fs[b]).unwrap()));
            }
        }
    }
}

#[test]
fn duals_are_valid_and_discrete() {
    for inst in corpus() {
        let d = pf_object(&inst.algebra).unwrap();
        let c = &d.category;
        let report = topcat::validate_object_of_c(c);
        assert!(report.passed(), "{}: {report}", inst.label);
        assert!(
            c.obj_topology().is_discrete() && c.arr_topology().is_discrete(),
            "{}",
            inst.label
        );
        assert!(c.arr_topology().is_open(&c.identities()));
    }
}

#[test]
fn source_and_target_images_of_theta_opens() {
    for inst in corpus() {
        let d = pf_object(&inst.algebra).unwrap();
        let alg = &inst.algebra;
        let c = &d.category;
        for a in alg.elements() {
            let open = d.theta_open(a);
            let srcs: Vec<usize> = open.iter().map(|f| c.src(f)).collect();
            let src_set = Subset::from_iter(c.num_objects(), srcs.iter().copied());
            assert_eq!(
                src_set.len(),
                srcs.len(),
                "{}: src not injective on {}",
                inst.label,
                alg.name(a)
            );
            assert_eq!(src_set, d.hat(alg.domain(a)), "{}: {}", inst.label, alg.name(a));
            let tgt_set = Subset::from_iter(c.num_objects(), open.iter().map(|f| c.tgt(f)));
            assert_eq!(tgt_set, d.hat(alg.range(a)), "{}: {}", inst.label, alg.name(a));
        }
    }
}

/// Every proper filter of a finite algebra is principal.
fn proper_filters(rep: &Representable) -> Vec<Subset> {
    rep.algebra()
        .elements()
        .filter(|&a| a != rep.zero())
        .map(|a| rep.up(a).clone())
        .collect()
}

#[test]
fn prime_filters_are_maximal_and_of_the_form_mu_a() {
    for inst in corpus() {
        let rep = Representable::new(inst.algebra.clone()).unwrap();
        let primes = filters::enumerate_prime_filters(&rep);
        for f in proper_filters(&rep) {
            assert!(filters::is_filter(&rep, &f));
            assert_eq!(
                filters::is_prime(&rep, &f).unwrap(),
                filters::is_maximal(&rep, &f).unwrap(),
                "{}",
                inst.label
            );
        }
        let ultras = filters::enumerate_domain_ultrafilters(&rep);
        let mut built: Vec<FilterSet> = Vec::new();
        for mu in &ultras {
            for a in rep.algebra().elements() {
                if let Generated::Proper(p) = filters::prime_from(&rep, mu, a) {
                    assert!(filters::is_prime(&rep, p.members()).unwrap(), "{}", inst.label);
                    if !built.contains(&p) {
                        built.push(p);
                    }
                }
            }
        }
        built.sort_by(|a, b| a.members().cmp(b.members()));
        let mut sorted = primes.clone();
        sorted.sort_by(|a, b| a.members().cmp(b.members()));
        assert_eq!(built, sorted, "{}", inst.label);
        for p in &primes {
            let mu = filters::source_of(&rep, p).unwrap();
            for a in p.members().iter() {
                assert_eq!(
                    filters::prime_from(&rep, &mu, a),
                    Generated::Proper(p.clone()),
                    "{}",
                    inst.label
                );
            }
        }
    }
}

#[test]
fn ultrafilters_lift_and_restrict() {
    for inst in corpus() {
        let rep = Representable::new(inst.algebra.clone()).unwrap();
        for mu in filters::enumerate_domain_ultrafilters(&rep) {
            let up = rep.upward_closure(mu.members());
            let back = up.intersection(rep.domain_elements());
            assert_eq!(&back, mu.members(), "{}", inst.label);
        }
    }
}

#[test]
fn filter_composition_laws() {
    for inst in corpus() {
        let rep = Representable::new(inst.algebra.clone()).unwrap();
        let primes = filters::enumerate_prime_filters(&rep);
        for p in &primes {
            for q in &primes {
                if let Generated::Proper(pq) = filters::compose_filters(&rep, p, q) {
                    assert_eq!(
                        filters::target_of(&rep, &pq).unwrap(),
                        filters::target_of(&rep, q).unwrap(),
                        "{}",
                        inst.label
                    );
                    for r in &primes {
                        if let Generated::Proper(pr) = filters::compose_filters(&rep, p, r) {
                            if pr == pq {
                                assert_eq!(q, r, "{}: left cancellation", inst.label);
                            }
                        }
                    }
                }
                let same_source = filters::source_of(&rep, p).unwrap() == filters::source_of(&rep, q).unwrap();
                if same_source && !p.members().is_disjoint(q.members()) {
                    assert_eq!(p, q, "{}", inst.label);
                }
            }
        }
    }
}

#[test]
fn hom_invariants() {
    for (label, h) in corpus_homs() {
        assert!(algebra::check_homomorphism(&h).holds, "{label}");
        assert!(algebra::preserves_joins(&h).holds, "{label}");
        if let Some(v) = duality::domain_bijection_criterion(&h).unwrap() {
            assert!(v.holds, "{label}: {v}");
        }
        if let Some(v) = duality::dual_bijection_criterion(&h).unwrap() {
            assert!(v.holds, "{label}: {v}");
        }
    }
}

#[test]
fn duals_of_homs_are_star_coherent_and_natural() {
    for (label, h) in corpus_homs() {
        let f = dualize::pf_morphism(&h).unwrap();
        assert!(topcat::check_multifunctor(&f).passed(), "{label}");
        assert!(topcat::is_continuous_multifunctor(&f), "{label}");
        let stars = topcat::star_checks(&f);
        assert!(stars.coherent, "{label}: {}", stars.report());
        let props = dualize::pf_is_functor_iff_locally_proper(&h).unwrap();
        assert_eq!(props.plain_functor, props.locally_proper, "{label}");
        let nat = duality::check_naturality_theta(&h).unwrap();
        assert!(nat.holds, "{label}: {nat}");
        let restricted = duality::restricted_duality_hom(&h).unwrap();
        assert!(restricted.report().passed(), "{label}");
    }
}

#[test]
fn composites_of_coherent_functors_are_coherent() {
    let homs = corpus_homs();
    let mut checked = 0;
    for (l1, h1) in &homs {
        for (l2, h2) in &homs {
            if h1.target != h2.source || h1.source.len() > 6 || h2.target.len() > 6 {
                continue;
            }
            let f1 = dualize::pf_morphism(h1).unwrap();
            let f2 = dualize::pf_morphism(h2).unwrap();
            let g = topcat::compose_multifunctors(&f2, &f1).unwrap();
            assert!(topcat::check_multifunctor(&g).passed(), "{l2} then {l1}");
            assert!(topcat::star_checks(&g).coherent, "{l2} then {l1}");
            checked += 1;
        }
    }
    assert!(checked > 10);
}

fn dual_categories() -> Vec<(String, TopCategory)> {
    let mut out: Vec<(String, TopCategory)> = small_corpus()
        .into_iter()
        .map(|i| (i.label.clone(), pf_object(&i.algebra).unwrap().category))
        .collect();
    out.push(("point".into(), samples::point_category()));
    out.push(("empty".into(), TopCategory::empty()));
    out
}

#[test]
fn phi_is_an_isomorphism_on_objects_of_c() {
    for (label, c) in dual_categories() {
        let p = phi(&c).unwrap_or_else(|e| panic!("{label}: {e}"));
        assert!(p.iso.verify().passed(), "{label}");
        let back = p.iso.inverse().expect("bijective");
        assert!(back.verify().passed(), "{label}");
    }
}

#[test]
fn phi_naturality_on_dual_functors() {
    for (label, h) in corpus_homs()
        .into_iter()
        .filter(|(_, h)| h.source.len() <= 6 && h.target.len() <= 6)
    {
        let f = dualize::pf_morphism(&h).unwrap();
        let v = duality::check_naturality_phi(&f).unwrap();
        assert!(v.holds, "{label}: {v}");
        let r = duality::restricted_duality_functor(&f).unwrap();
        assert!(r.report().passed(), "{label}");
    }
}

#[test]
fn section_algebras_satisfy_the_axioms() {
    for (label, c) in dual_categories() {
        let sec = seccl_object(&c).unwrap();
        assert!(sec.algebra.check_axioms().all_pass(), "{label}");
        assert!(sections::images_form_basis(&sec).holds, "{label}");
    }
}

/// Every choice of at most one star arrow per object.
fn all_choice_maps(c: &TopCategory) -> Vec<Section> {
    let mut out = vec![Vec::new()];
    for x in 0..c.num_objects() {
        let options: Vec<Option<usize>> = std::iter::once(None).chain(c.star(x).iter().map(Some)).collect();
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Option<usize>>| {
                options.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Section::new).collect()
}

#[test]
fn sections_are_exactly_the_open_clopen_choices() {
    let mut cats = dual_categories();
    cats.push(("non-epi".into(), samples::non_epi_category()));
    for (label, c) in cats.into_iter().filter(|(_, c)| c.num_arrows() <= 16) {
        let listed = sections::enumerate_sections_unchecked(&c);
        for s in &listed {
            assert!(c.obj_topology().is_clopen(&s.domain()), "{label}");
            assert!(c.arr_topology().is_open(&s.image(c.num_arrows())), "{label}");
        }
        let brute: Vec<Section> = all_choice_maps(&c)
            .into_iter()
            .filter(|s| c.obj_topology().is_clopen(&s.domain()) && c.arr_topology().is_open(&s.image(c.num_arrows())))
            .collect();
        assert_eq!(brute.len(), listed.len(), "{label}");
        for s in &brute {
            assert!(listed.contains(s), "{label}: {}", s.label(&c));
            assert!(sections::is_section(&c, s));
        }
    }
}
