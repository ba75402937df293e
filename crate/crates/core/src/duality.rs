//! The double-dual isomorphisms θ: A → SecCl(pf(A)) and
//! φ: C → pf(SecCl(C)), their naturality squares, and the restricted
//! duality between locally proper homomorphisms and plain functors.

use thiserror::Error;

use crate::algebra::{
    self, check_homomorphism, check_locally_proper, AlgebraError, FinAlgebra, Homomorphism, Representable,
};
use crate::dualize::{pf_morphism_between, pf_of, DualCategory, DualizeError};
use crate::filters::{self, FilterSet};
use crate::sections::{seccl_morphism_between, seccl_object, Section, SectionAlgebra, SectionError};
use crate::subset::Subset;
use crate::topcat::{self, is_plain_functor, MultiFunctor, TopCategory};
use crate::{Report, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DualityError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Dualize(#[from] DualizeError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error("not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// A pair of element maps claimed to be mutually inverse homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraIso {
    pub forward: Homomorphism,
    pub backward: Homomorphism,
}

impl AlgebraIso {
    pub fn verify(&self) -> Report {
        let mut r = Report::default();
        r.push("forward homomorphism", check_homomorphism(&self.forward));
        r.push("backward homomorphism", check_homomorphism(&self.backward));
        let f = &self.forward.map;
        let b = &self.backward.map;
        let left = (0..f.len()).find(|&a| b[f[a]] != a);
        let right = (0..b.len()).find(|&x| f[b[x]] != x);
        r.push(
            "mutually inverse",
            match (left, right) {
                (None, None) => Verdict::pass(),
                (Some(a), _) => Verdict::fail(format!("round trip moves {}", self.forward.source.name(a))),
                (_, Some(x)) => Verdict::fail(format!("round trip moves {}", self.forward.target.name(x))),
            },
        );
        r
    }
}

/// Object and arrow bijections between two topological categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryIso {
    pub source: TopCategory,
    pub target: TopCategory,
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

fn invert(map: &[usize], n: usize) -> Option<Vec<usize>> {
    if map.len() != n {
        return None;
    }
    let mut inv = vec![usize::MAX; n];
    for (i, &j) in map.iter().enumerate() {
        if j >= n || inv[j] != usize::MAX {
            return None;
        }
        inv[j] = i;
    }
    Some(inv)
}

impl CategoryIso {
    /// The inverse pair, if both maps are bijections.
    pub fn inverse(&self) -> Option<CategoryIso> {
        Some(CategoryIso {
            source: self.target.clone(),
            target: self.source.clone(),
            objects: invert(&self.objects, self.target.num_objects())?,
            arrows: invert(&self.arrows, self.target.num_arrows())?,
        })
    }

    fn functor_failure(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        for f in 0..s.num_arrows() {
            let g = self.arrows[f];
            if t.src(g) != self.objects[s.src(f)] || t.tgt(g) != self.objects[s.tgt(f)] {
                return Some(format!("ends of {}", s.arrow_name(f)));
            }
        }
        for x in 0..s.num_objects() {
            if self.arrows[s.id_of(x)] != t.id_of(self.objects[x]) {
                return Some(format!("identity at {}", s.object_name(x)));
            }
        }
        for (f, g) in s.composable_pairs() {
            let fg = s.comp(f, g).unwrap();
            if t.comp(self.arrows[f], self.arrows[g]) != Some(self.arrows[fg]) {
                return Some(format!("composite {}·{}", s.arrow_name(f), s.arrow_name(g)));
            }
        }
        None
    }

    fn continuity_failure(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        if let Some(x) = topcat::continuity_failure(s.obj_topology(), t.obj_topology(), &self.objects) {
            return Some(format!("object map near {}", s.object_name(x)));
        }
        topcat::continuity_failure(s.arr_topology(), t.arr_topology(), &self.arrows)
            .map(|f| format!("arrow map near {}", s.arrow_name(f)))
    }

    /// Bijective functor, continuous, with continuous inverse (so open).
    pub fn verify(&self) -> Report {
        let mut r = Report::default();
        let inverse = self.inverse();
        r.push(
            "bijective",
            if inverse.is_some() {
                Verdict::pass()
            } else {
                Verdict::fail("object or arrow map is not a bijection")
            },
        );
        r.push("functor", Verdict::from_witness(self.functor_failure()));
        r.push("continuous", Verdict::from_witness(self.continuity_failure()));
        let open = match &inverse {
            Some(inv) => inv.continuity_failure().map(|w| format!("inverse {w}")),
            None => Some("no inverse".into()),
        };
        r.push("open", Verdict::from_witness(open));
        r
    }
}

/// θ_A together with the structures it connects.
#[derive(Clone, Debug)]
pub struct Theta {
    pub dual: DualCategory,
    pub sections: SectionAlgebra,
    pub iso: AlgebraIso,
}

impl Theta {
    /// Image of element `a` as a section index.
    pub fn apply(&self, a: usize) -> usize {
        self.iso.forward.map[a]
    }
}

/// a^θ as a section: defined on D(a)-hat, choosing (μ∘a)^↑ at μ.
pub fn theta_section(dual: &DualCategory, a: usize) -> Result<Section, DualityError> {
    let rep = &dual.algebra;
    let da = rep.algebra().domain(a);
    let mut choice = vec![None; dual.objects.len()];
    for (i, mu) in dual.objects.iter().enumerate() {
        if !mu.contains(da) {
            continue;
        }
        let p = filters::prime_from(rep, mu, a)
            .proper()
            .ok_or_else(|| DualityError::Inconsistent("(μ∘a)^↑ is improper on D(a)-hat".into()))?;
        choice[i] = Some(
            dual.arrow_of(&p)
                .ok_or_else(|| DualityError::Inconsistent("(μ∘a)^↑ is not an arrow".into()))?,
        );
    }
    let s = Section::new(choice);
    if s.image(dual.arrows.len()) != dual.theta_open(a) {
        return Err(DualityError::Inconsistent(format!(
            "section of {} differs from its basic open",
            rep.algebra().name(a)
        )));
    }
    Ok(s)
}

pub fn theta(alg: &FinAlgebra) -> Result<Theta, DualityError> {
    theta_of(Representable::new(alg.clone())?)
}

pub fn theta_of(rep: Representable) -> Result<Theta, DualityError> {
    let dual = pf_of(rep)?;
    let sections = seccl_object(&dual.category)?;
    let alg = dual.algebra.algebra().clone();
    let mut map = Vec::with_capacity(alg.len());
    for a in alg.elements() {
        let s = theta_section(&dual, a)?;
        map.push(
            sections
                .index_of(&s)
                .ok_or_else(|| DualityError::Inconsistent("a^θ is not an enumerated section".into()))?,
        );
    }
    let forward = Homomorphism::new(alg.clone(), sections.algebra.clone(), map)?;
    let backward = forward.inverse().ok_or_else(|| {
        DualityError::NotIsomorphism(format!(
            "θ is not a bijection ({} elements, {} sections)",
            alg.len(),
            sections.algebra.len()
        ))
    })?;
    let iso = AlgebraIso { forward, backward };
    let report = iso.verify();
    if !report.passed() {
        return Err(DualityError::NotIsomorphism(report.to_string()));
    }
    Ok(Theta { dual, sections, iso })
}

/// φ_C together with the structures it connects.
#[derive(Clone, Debug)]
pub struct Phi {
    pub sections: SectionAlgebra,
    pub dual: DualCategory,
    pub iso: CategoryIso,
}

pub fn phi(cat: &TopCategory) -> Result<Phi, DualityError> {
    let sections = seccl_object(cat)?;
    let rep = Representable::new(sections.algebra.clone())?;
    let dual = pf_of(rep)?;
    let n = sections.sections.len();
    let containing = |pred: &dyn Fn(&Section) -> bool| -> Subset {
        Subset::from_iter(n, (0..n).filter(|&i| pred(&sections.sections[i])))
    };
    let mut objects = Vec::with_capacity(cat.num_objects());
    for x in 0..cat.num_objects() {
        let id = cat.id_of(x);
        // identity-only sections containing 1_x
        let mu = containing(&|s: &Section| {
            s.contains_arrow(cat, id) && s.choices().iter().flatten().all(|&f| cat.is_identity(f))
        });
        objects
            .push(dual.object_of(&FilterSet::new(mu)).ok_or_else(|| {
                DualityError::Inconsistent(format!("{}^φ is not an ultrafilter", cat.object_name(x)))
            })?);
    }
    let mut arrows = Vec::with_capacity(cat.num_arrows());
    for c in 0..cat.num_arrows() {
        let p = containing(&|s: &Section| s.contains_arrow(cat, c));
        arrows.push(
            dual.arrow_of(&FilterSet::new(p))
                .ok_or_else(|| DualityError::Inconsistent(format!("{}^φ is not a prime filter", cat.arrow_name(c))))?,
        );
    }
    let iso = CategoryIso {
        source: cat.clone(),
        target: dual.category.clone(),
        objects,
        arrows,
    };
    let report = iso.verify();
    if !report.passed() {
        return Err(DualityError::NotIsomorphism(report.to_string()));
    }
    Ok(Phi { sections, dual, iso })
}

/// SecCl(pf(h)) ∘ θ_A = θ_B ∘ h, given the θ maps and SecCl(pf(h)) as
/// element maps.
pub fn check_naturality_theta_with(
    h: &Homomorphism,
    theta_a: &[usize],
    theta_b: &[usize],
    double_dual: &Homomorphism,
) -> Verdict {
    for a in h.source.elements() {
        let left = double_dual.map[theta_a[a]];
        let right = theta_b[h.map[a]];
        if left != right {
            return Verdict::fail(format!(
                "at {}: {} ≠ {}",
                h.source.name(a),
                double_dual.target.name(left),
                double_dual.target.name(right)
            ));
        }
    }
    Verdict::pass()
}

/// SecCl(pf(h)) for h: A → B, using the structures inside the two θs.
pub fn double_dual_hom(h: &Homomorphism, ta: &Theta, tb: &Theta) -> Result<Homomorphism, DualityError> {
    let f = pf_morphism_between(h, &ta.dual, &tb.dual)?;
    Ok(seccl_morphism_between(&f, &tb.sections, &ta.sections)?)
}

pub fn check_naturality_theta(h: &Homomorphism) -> Result<Verdict, DualityError> {
    let ta = theta(&h.source)?;
    let tb = theta(&h.target)?;
    let dd = double_dual_hom(h, &ta, &tb)?;
    Ok(check_naturality_theta_with(
        h,
        &ta.iso.forward.map,
        &tb.iso.forward.map,
        &dd,
    ))
}

/// pf(SecCl(F)) ∘ φ_C = φ_D ∘ F, given both φ isos and pf(SecCl(F)).
pub fn check_naturality_phi_with(
    fun: &MultiFunctor,
    phi_c: &CategoryIso,
    phi_d: &CategoryIso,
    g: &MultiFunctor,
) -> Verdict {
    let (s, t) = (&fun.source, &g.target);
    for x in 0..s.num_objects() {
        if g.obj(phi_c.objects[x]) != phi_d.objects[fun.obj(x)] {
            return Verdict::fail(format!("objects differ at {}", s.object_name(x)));
        }
    }
    for c in 0..s.num_arrows() {
        let left = g.arr(phi_c.arrows[c]).clone();
        let right = Subset::from_iter(t.num_arrows(), fun.arr(c).iter().map(|d| phi_d.arrows[d]));
        if left != right {
            return Verdict::fail(format!(
                "at {}: {} ≠ {}",
                s.arrow_name(c),
                t.arrows_named(&left),
                t.arrows_named(&right)
            ));
        }
    }
    Verdict::pass()
}

/// pf(SecCl(F)) for F: C → D, using the structures inside the two φs.
pub fn double_dual_functor(fun: &MultiFunctor, pc: &Phi, pd: &Phi) -> Result<MultiFunctor, DualityError> {
    let h = seccl_morphism_between(fun, &pc.sections, &pd.sections)?;
    Ok(pf_morphism_between(&h, &pd.dual, &pc.dual)?)
}

pub fn check_naturality_phi(fun: &MultiFunctor) -> Result<Verdict, DualityError> {
    let pc = phi(&fun.source)?;
    let pd = phi(&fun.target)?;
    let g = double_dual_functor(fun, &pc, &pd)?;
    Ok(check_naturality_phi_with(fun, &pc.iso, &pd.iso, &g))
}

/// Observed properness of a morphism and its duals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RestrictedDuality {
    /// h is locally proper / F is a plain functor.
    pub restricted: bool,
    /// pf(h) is a plain functor / SecCl(F) is locally proper.
    pub dual_restricted: bool,
    /// SecCl(pf(h)) is locally proper / pf(SecCl(F)) is a plain functor.
    pub double_dual_restricted: bool,
}

impl RestrictedDuality {
    /// Restricted morphisms must have restricted duals; nothing is claimed
    /// about the converse.
    pub fn report(&self) -> Report {
        let mut r = Report::default();
        let implies = |a: bool, b: bool, what: &str| {
            if !a || b {
                Verdict::pass()
            } else {
                Verdict::fail(what.to_string())
            }
        };
        r.push(
            "dual preserves restriction",
            implies(self.restricted, self.dual_restricted, "dual is not restricted"),
        );
        r.push(
            "double dual preserves restriction",
            implies(
                self.restricted,
                self.double_dual_restricted,
                "double dual is not restricted",
            ),
        );
        r
    }
}

pub fn restricted_duality_hom(h: &Homomorphism) -> Result<RestrictedDuality, DualityError> {
    let ta = theta(&h.source)?;
    let tb = theta(&h.target)?;
    let f = pf_morphism_between(h, &ta.dual, &tb.dual)?;
    let dd = seccl_morphism_between(&f, &tb.sections, &ta.sections)?;
    Ok(RestrictedDuality {
        restricted: check_locally_proper(h)?.holds,
        dual_restricted: is_plain_functor(&f),
        double_dual_restricted: check_locally_proper(&dd)?.holds,
    })
}

pub fn restricted_duality_functor(fun: &MultiFunctor) -> Result<RestrictedDuality, DualityError> {
    let pc = phi(&fun.source)?;
    let pd = phi(&fun.target)?;
    let h = seccl_morphism_between(fun, &pc.sections, &pd.sections)?;
    let g = pf_morphism_between(&h, &pd.dual, &pc.dual)?;
    Ok(RestrictedDuality {
        restricted: is_plain_functor(fun),
        dual_restricted: check_locally_proper(&h)?.holds,
        double_dual_restricted: is_plain_functor(&g),
    })
}

/// Whether `h` maps the domain elements of its source bijectively onto
/// those of its target.
pub fn is_domain_bijection(h: &Homomorphism) -> Result<bool, DualityError> {
    let a = Representable::new(h.source.clone())?;
    let b = Representable::new(h.target.clone())?;
    let image = Subset::from_iter(b.len(), a.domain_elements().iter().map(|x| h.map[x]));
    Ok(image == *b.domain_elements() && image.len() == a.domain_elements().len())
}

/// For a locally proper h that is bijective on domain elements: `Some`
/// verdict on whether h is an isomorphism. `None` when the hypotheses fail.
pub fn domain_bijection_criterion(h: &Homomorphism) -> Result<Option<Verdict>, DualityError> {
    if !check_locally_proper(h)?.holds || !is_domain_bijection(h)? {
        return Ok(None);
    }
    Ok(Some(if algebra::is_isomorphism(h) {
        Verdict::pass()
    } else {
        Verdict::fail("locally proper, bijective on domain elements, but not an isomorphism")
    }))
}

/// The same criterion read through the dual: pf(h) is a plain functor that
/// is bijective on objects, and then it must be an isomorphism of
/// topological categories.
pub fn dual_bijection_criterion(h: &Homomorphism) -> Result<Option<Verdict>, DualityError> {
    let ta = theta(&h.source)?;
    let tb = theta(&h.target)?;
    let f = pf_morphism_between(h, &ta.dual, &tb.dual)?;
    let Some(arrows) = topcat::arrow_function(&f) else {
        return Ok(None);
    };
    if invert(f.obj_map(), f.target.num_objects()).is_none() {
        return Ok(None);
    }
    let iso = CategoryIso {
        source: f.source.clone(),
        target: f.target.clone(),
        objects: f.obj_map().to_vec(),
        arrows,
    };
    let r = iso.verify();
    Ok(Some(if r.passed() {
        Verdict::pass()
    } else {
        Verdict::fail(r.to_string())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualize::pf_object;
    use crate::samples;

    #[test]
    fn theta_of_running_example() {
        let t = theta(&samples::ex1()).unwrap();
        assert_eq!(t.sections.algebra.len(), 8);
        let alg = samples::ex1();
        let s3 = alg.index_of("s3").unwrap();
        let sec = &t.sections.sections[t.apply(s3)];
        assert_eq!(sec.label(&t.dual.category), "{up(e3), up(s)}");
        assert_eq!(sec.choice(0), Some(2));
        assert_eq!(sec.choice(1), Some(1));
        assert!(t.sections.sections[t.apply(0)].is_empty());
        assert!(t.iso.verify().passed());
    }

    #[test]
    fn theta_of_small_algebras() {
        assert_eq!(theta(&samples::one_element()).unwrap().sections.algebra.len(), 1);
        assert_eq!(theta(&samples::ex1b()).unwrap().sections.algebra.len(), 6);
    }

    #[test]
    fn phi_examples() {
        let cat = pf_object(&samples::ex1()).unwrap().category;
        let p = phi(&cat).unwrap();
        let up_s = cat.arrow_index("up(s)").unwrap();
        let image = &p.dual.arrows[p.iso.arrows[up_s]];
        let expected = Subset::from_iter(8, (0..8).filter(|&i| p.sections.sections[i].contains_arrow(&cat, up_s)));
        assert_eq!(image.members(), &expected);
        assert!(p.iso.verify().passed());

        let empty = phi(&TopCategory::empty()).unwrap();
        assert_eq!(empty.iso.objects.len(), 0);

        let point = phi(&samples::point_category()).unwrap();
        assert_eq!(point.sections.algebra.len(), 2);
        assert_eq!(
            (point.dual.category.num_objects(), point.dual.category.num_arrows()),
            (1, 1)
        );
    }

    #[test]
    fn theta_naturality() {
        let id = Homomorphism::identity(samples::ex1());
        assert!(check_naturality_theta(&id).unwrap().holds);
        let incl = samples::ex1b_inclusion();
        assert!(check_naturality_theta(&incl).unwrap().holds);

        let ta = theta(&incl.source).unwrap();
        let tb = theta(&incl.target).unwrap();
        let dd = double_dual_hom(&incl, &ta, &tb).unwrap();
        let mut perturbed = ta.iso.forward.map.clone();
        perturbed.swap(4, 5);
        assert!(!check_naturality_theta_with(&incl, &perturbed, &tb.iso.forward.map, &dd).holds);
    }

    #[test]
    fn phi_naturality() {
        let cat = pf_object(&samples::ex1()).unwrap().category;
        assert!(check_naturality_phi(&MultiFunctor::identity(&cat)).unwrap().holds);
        let f = crate::dualize::pf_morphism(&samples::ex1b_inclusion()).unwrap();
        assert!(check_naturality_phi(&f).unwrap().holds);

        let pc = phi(&f.source).unwrap();
        let pd = phi(&f.target).unwrap();
        let g = double_dual_functor(&f, &pc, &pd).unwrap();
        let mut bad = pc.iso.clone();
        bad.arrows.swap(0, 2);
        assert!(!check_naturality_phi_with(&f, &bad, &pd.iso, &g).holds);
    }

    #[test]
    fn restricted_duality_examples() {
        let id = restricted_duality_hom(&Homomorphism::identity(samples::ex1())).unwrap();
        assert!(id.restricted && id.dual_restricted && id.double_dual_restricted);
        let cat = pf_object(&samples::ex1()).unwrap().category;
        let plain = restricted_duality_functor(&MultiFunctor::identity(&cat)).unwrap();
        assert!(plain.restricted && plain.dual_restricted && plain.double_dual_restricted);
        let incl = restricted_duality_hom(&samples::ex1b_inclusion()).unwrap();
        assert!(!incl.restricted && !incl.dual_restricted);
        assert!(incl.report().passed());
    }

    #[test]
    fn domain_bijection_examples() {
        let id = Homomorphism::identity(samples::ex1());
        assert_eq!(domain_bijection_criterion(&id).unwrap(), Some(Verdict::pass()));
        assert_eq!(dual_bijection_criterion(&id).unwrap(), Some(Verdict::pass()));
        assert_eq!(domain_bijection_criterion(&samples::ex1b_inclusion()).unwrap(), None);
    }
}
