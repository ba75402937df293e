//! From representable algebras to Stone étale categories: prime filters as
//! arrows, domain ultrafilters as objects, and inverse images on morphisms.

use thiserror::Error;

use crate::algebra::{self, AlgebraError, FinAlgebra, Homomorphism, Representable};
use crate::filters::{self, FilterError, FilterSet, Generated};
use crate::subset::Subset;
use crate::topcat::{
    is_plain_functor, CategoryError, CategoryParts, FinTopology, FunctorError, MultiFunctor, TopCategory,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DualizeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// pf(A) together with the filters behind each object and arrow.
#[derive(Clone, Debug)]
pub struct DualCategory {
    pub algebra: Representable,
    pub category: TopCategory,
    /// Ultrafilters of the domain elements, one per object.
    pub objects: Vec<FilterSet>,
    /// Prime filters, one per arrow.
    pub arrows: Vec<FilterSet>,
}

impl DualCategory {
    pub fn object_of(&self, mu: &FilterSet) -> Option<usize> {
        self.objects.iter().position(|o| o == mu)
    }

    pub fn arrow_of(&self, p: &FilterSet) -> Option<usize> {
        self.arrows.iter().position(|q| q == p)
    }

    /// a^θ: arrows whose prime filter contains `a`.
    pub fn theta_open(&self, a: usize) -> Subset {
        Subset::from_iter(
            self.arrows.len(),
            (0..self.arrows.len()).filter(|&i| self.arrows[i].contains(a)),
        )
    }

    /// α̂: objects whose ultrafilter contains `alpha`.
    pub fn hat(&self, alpha: usize) -> Subset {
        Subset::from_iter(
            self.objects.len(),
            (0..self.objects.len()).filter(|&i| self.objects[i].contains(alpha)),
        )
    }
}

/// pf on objects. Errors if the algebra fails an axiom.
pub fn pf_object(alg: &FinAlgebra) -> Result<DualCategory, DualizeError> {
    pf_of(Representable::new(alg.clone())?)
}

fn inconsistent(what: impl Into<String>) -> DualizeError {
    DualizeError::Inconsistent(what.into())
}

pub fn pf_of(rep: Representable) -> Result<DualCategory, DualizeError> {
    let alg = rep.algebra();
    let objects = filters::enumerate_domain_ultrafilters(&rep);
    let arrows = filters::enumerate_prime_filters(&rep);
    let (o, m) = (objects.len(), arrows.len());
    let find_obj = |f: &FilterSet| objects.iter().position(|x| x == f);
    let find_arr = |f: &FilterSet| arrows.iter().position(|x| x == f);

    let mut src = Vec::with_capacity(m);
    let mut tgt = Vec::with_capacity(m);
    for p in &arrows {
        let s = filters::source_of(&rep, p)?;
        let t = filters::target_of(&rep, p)?;
        src.push(find_obj(&s).ok_or_else(|| inconsistent("source is not an enumerated ultrafilter"))?);
        tgt.push(find_obj(&t).ok_or_else(|| inconsistent("target is not an enumerated ultrafilter"))?);
    }
    let mut id_of = Vec::with_capacity(o);
    for mu in &objects {
        let up = FilterSet::new(rep.upward_closure(mu.members()));
        id_of.push(find_arr(&up).ok_or_else(|| inconsistent("μ^↑ is not a prime filter"))?);
    }
    let mut comp = vec![None; m * m];
    for i in 0..m {
        for j in 0..m {
            let c = filters::compose_filters(&rep, &arrows[i], &arrows[j]);
            match (tgt[i] == src[j], c) {
                (true, Generated::Proper(f)) => {
                    comp[i * m + j] = Some(find_arr(&f).ok_or_else(|| inconsistent("composite is not prime"))?);
                }
                (false, Generated::Improper) => {}
                _ => return Err(inconsistent("composite is proper exactly when the arrows meet")),
            }
        }
    }

    let dom = rep.domain_elements();
    let hats: Vec<Subset> = dom
        .iter()
        .map(|a| Subset::from_iter(o, (0..o).filter(|&i| objects[i].contains(a))))
        .collect();
    let thetas: Vec<Subset> = alg
        .elements()
        .map(|a| Subset::from_iter(m, (0..m).filter(|&i| arrows[i].contains(a))))
        .collect();
    let object_names = objects
        .iter()
        .map(|mu| atom_name(&rep, mu))
        .collect::<Result<Vec<_>, _>>()?;
    let arrow_names = arrows
        .iter()
        .map(|p| {
            filters::least_element(&rep, p)
                .map(|a| format!("up({})", alg.name(a)))
                .ok_or_else(|| inconsistent("prime filter without least element"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let category = TopCategory::new(CategoryParts {
        objects: object_names,
        arrows: arrow_names,
        src,
        tgt,
        id_of,
        comp,
        obj_top: FinTopology::generate(o, &hats),
        arr_top: FinTopology::generate(m, &thetas),
    })?;
    Ok(DualCategory {
        algebra: rep,
        category,
        objects,
        arrows,
    })
}

fn atom_name(rep: &Representable, mu: &FilterSet) -> Result<String, DualizeError> {
    filters::least_element(rep, mu)
        .map(|a| rep.algebra().name(a).to_string())
        .ok_or_else(|| inconsistent("ultrafilter without least element"))
}

/// pf on a morphism h: A → B, given the two duals; the result goes from
/// pf(B) to pf(A).
pub fn pf_morphism_between(
    h: &Homomorphism,
    dual_source: &DualCategory,
    dual_target: &DualCategory,
) -> Result<MultiFunctor, DualizeError> {
    let verdict = algebra::check_homomorphism(h);
    if !verdict.holds {
        return Err(DualizeError::NotHomomorphism(verdict.witness.unwrap_or_default()));
    }
    let a = &dual_source.algebra;
    let dom_a = a.domain_elements();

    let mut obj_map = Vec::with_capacity(dual_target.objects.len());
    for mu in &dual_target.objects {
        let nu = FilterSet::new(h.preimage(mu.members()).intersection(dom_a));
        obj_map.push(
            dual_source
                .object_of(&nu)
                .ok_or_else(|| inconsistent("inverse image of an ultrafilter is not an ultrafilter"))?,
        );
    }

    let src_b = dual_target.category.src_map();
    let mut rel = Vec::with_capacity(dual_target.arrows.len());
    for (i, p) in dual_target.arrows.iter().enumerate() {
        let nu = &dual_source.objects[obj_map[src_b[i]]];
        let mut values = Subset::empty(dual_source.arrows.len());
        for class in partition(a, &h.preimage(p.members()), nu) {
            let q = FilterSet::new(class);
            values.insert(
                dual_source
                    .arrow_of(&q)
                    .ok_or_else(|| inconsistent("class of the inverse image is not a prime filter"))?,
            );
        }
        rel.push(values);
    }
    Ok(MultiFunctor::new(
        dual_target.category.clone(),
        dual_source.category.clone(),
        obj_map,
        rel,
    )?)
}

/// Classes of `a ~ b ⟺ ∃α ∈ ν: α∘a = α∘b` on `set`, ordered by least member.
fn partition(rep: &Representable, set: &Subset, nu: &FilterSet) -> Vec<Subset> {
    let alg = rep.algebra();
    let members: Vec<usize> = set.iter().collect();
    let mut classes: Vec<Subset> = Vec::new();
    let mut placed = Subset::empty(rep.len());
    for &a in &members {
        if placed.contains(a) {
            continue;
        }
        let class = Subset::from_iter(
            rep.len(),
            members
                .iter()
                .copied()
                .filter(|&b| nu.members().iter().any(|al| alg.compose(al, a) == alg.compose(al, b))),
        );
        placed.union_with(&class);
        classes.push(class);
    }
    classes
}

/// pf(h) for h: A → B, as a multivalued functor pf(B) → pf(A).
pub fn pf_morphism(h: &Homomorphism) -> Result<MultiFunctor, DualizeError> {
    let da = pf_object(&h.source)?;
    let db = pf_object(&h.target)?;
    pf_morphism_between(h, &da, &db)
}

/// Both sides of "pf(h) is a plain functor ⟺ h is locally proper".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctorProperness {
    pub plain_functor: bool,
    pub locally_proper: bool,
}

pub fn pf_is_functor_iff_locally_proper(h: &Homomorphism) -> Result<FunctorProperness, DualizeError> {
    let plain_functor = is_plain_functor(&pf_morphism(h)?);
    let locally_proper = algebra::check_locally_proper(h)?.holds;
    if plain_functor != locally_proper {
        return Err(inconsistent(format!(
            "pf(h) plain functor = {plain_functor} but locally proper = {locally_proper}"
        )));
    }
    Ok(FunctorProperness {
        plain_functor,
        locally_proper,
    })
}
