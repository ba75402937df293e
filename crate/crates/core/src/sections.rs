//! From Stone étale categories back to algebras: local sections of the
//! source map over clopen sets of objects, with the operations defined
//! arrow-wise.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::{FinAlgebra, Homomorphism};
use crate::subset::Subset;
use crate::topcat::{star_checks, validate_object_of_c, MultiFunctor, TopCategory};
use crate::Verdict;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SectionError {
    #[error("category is not a Stone étale category with epi arrows: {0}")]
    NotObjectOfC(String),
    #[error("functor is not star coherent: {0}")]
    NotCoherent(String),
    #[error("sections are not closed: {0}")]
    NotClosed(String),
    #[error("set of arrows is not a section: {0}")]
    NotASection(String),
}

/// A section given by its choice map: `choice[x]` is the arrow picked at
/// object `x`, if `x` is in the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    choice: Vec<Option<usize>>,
}

impl Section {
    pub fn new(choice: Vec<Option<usize>>) -> Section {
        Section { choice }
    }

    pub fn empty(num_objects: usize) -> Section {
        Section {
            choice: vec![None; num_objects],
        }
    }

    /// The section whose arrows are exactly `image`, if no two share a
    /// source.
    pub fn from_image(cat: &TopCategory, image: &Subset) -> Result<Section, SectionError> {
        let mut choice = vec![None; cat.num_objects()];
        for f in image.iter() {
            let x = cat.src(f);
            if let Some(g) = choice[x] {
                return Err(SectionError::NotASection(format!(
                    "{} and {} share a source",
                    cat.arrow_name(g),
                    cat.arrow_name(f)
                )));
            }
            choice[x] = Some(f);
        }
        Ok(Section { choice })
    }

    pub fn choice(&self, x: usize) -> Option<usize> {
        self.choice[x]
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.choice
    }

    pub fn domain(&self) -> Subset {
        Subset::from_iter(
            self.choice.len(),
            self.choice.iter().enumerate().filter_map(|(x, c)| c.map(|_| x)),
        )
    }

    pub fn image(&self, num_arrows: usize) -> Subset {
        Subset::from_iter(num_arrows, self.choice.iter().flatten().copied())
    }

    pub fn is_empty(&self) -> bool {
        self.choice.iter().all(Option::is_none)
    }

    pub fn contains_arrow(&self, cat: &TopCategory, f: usize) -> bool {
        self.choice[cat.src(f)] == Some(f)
    }

    /// Arrow names of the image, in arrow order.
    pub fn label(&self, cat: &TopCategory) -> String {
        cat.arrows_named(&self.image(cat.num_arrows()))
    }
}

/// Each chosen arrow starts at its object, the domain is clopen and the
/// image is open.
pub fn is_section(cat: &TopCategory, s: &Section) -> bool {
    s.choice.len() == cat.num_objects()
        && s.choice
            .iter()
            .enumerate()
            .all(|(x, c)| c.is_none_or(|f| cat.src(f) == x))
        && cat.obj_topology().is_clopen(&s.domain())
        && cat.arr_topology().is_open(&s.image(cat.num_arrows()))
}

fn require_object_of_c(cat: &TopCategory) -> Result<(), SectionError> {
    let report = validate_object_of_c(cat);
    if report.passed() {
        return Ok(());
    }
    let failed: Vec<String> = report.failures().map(|(n, v)| format!("{n}: {v}")).collect();
    Err(SectionError::NotObjectOfC(failed.join("; ")))
}

/// All sections on clopens: domains by size then lexicographically, then
/// choices lexicographically with the first object most significant.
pub fn enumerate_sections(cat: &TopCategory) -> Result<Vec<Section>, SectionError> {
    require_object_of_c(cat)?;
    Ok(enumerate_sections_unchecked(cat))
}

/// Enumeration without validating the category first.
pub fn enumerate_sections_unchecked(cat: &TopCategory) -> Vec<Section> {
    let mut out = Vec::new();
    for dom in cat.obj_topology().clopens() {
        let points: Vec<usize> = dom.iter().collect();
        let stars: Vec<Vec<usize>> = points.iter().map(|&x| cat.star(x).to_vec()).collect();
        if stars.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; points.len()];
        loop {
            let mut choice = vec![None; cat.num_objects()];
            for (k, &x) in points.iter().enumerate() {
                choice[x] = Some(stars[k][idx[k]]);
            }
            let s = Section { choice };
            if cat.arr_topology().is_open(&s.image(cat.num_arrows())) {
                out.push(s);
            }
            // odometer, last object fastest
            let mut k = points.len();
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < stars[k].len() {
                    break true;
                }
                idx[k] = 0;
            };
            if !advanced {
                break;
            }
        }
    }
    out
}

/// A∘B = {a·b | a ∈ A, b ∈ B, r(a) = d(b)}.
pub fn sec_compose(cat: &TopCategory, a: &Section, b: &Section) -> Section {
    let choice = a
        .choice
        .iter()
        .map(|c| c.and_then(|f| b.choice[cat.tgt(f)].and_then(|g| cat.comp(f, g))))
        .collect();
    Section { choice }
}

/// A(A) = {1_x | x ∉ d[A]}.
pub fn sec_antidomain(cat: &TopCategory, a: &Section) -> Section {
    let choice = a
        .choice
        .iter()
        .enumerate()
        .map(|(x, c)| c.is_none().then(|| cat.id_of(x)))
        .collect();
    Section { choice }
}

/// R(A) = {1_x | x ∈ r[A]}.
pub fn sec_range(cat: &TopCategory, a: &Section) -> Section {
    let mut choice = vec![None; cat.num_objects()];
    for f in a.choice.iter().flatten() {
        let y = cat.tgt(*f);
        choice[y] = Some(cat.id_of(y));
    }
    Section { choice }
}

/// A ⊔ B = A ∪ (A(A)∘B).
pub fn sec_pref(cat: &TopCategory, a: &Section, b: &Section) -> Section {
    let rest = sec_compose(cat, &sec_antidomain(cat, a), b);
    let choice = a.choice.iter().zip(&rest.choice).map(|(x, y)| x.or(*y)).collect();
    Section { choice }
}

/// SecCl(C): the sections of C with their operation tables. Element `i` of
/// `algebra` is `sections[i]`, named by its image.
#[derive(Clone, Debug)]
pub struct SectionAlgebra {
    pub category: TopCategory,
    pub sections: Vec<Section>,
    pub algebra: FinAlgebra,
}

impl SectionAlgebra {
    pub fn index_of(&self, s: &Section) -> Option<usize> {
        self.sections.iter().position(|t| t == s)
    }

    /// The section containing exactly the arrows in `image`, if enumerated.
    pub fn index_of_image(&self, image: &Subset) -> Option<usize> {
        let s = Section::from_image(&self.category, image).ok()?;
        self.index_of(&s)
    }
}

pub fn seccl_object(cat: &TopCategory) -> Result<SectionAlgebra, SectionError> {
    require_object_of_c(cat)?;
    seccl_object_unchecked(cat)
}

/// Section algebra of a category that need not have epi arrows; used to
/// exhibit what goes wrong without that hypothesis.
pub fn seccl_object_unchecked(cat: &TopCategory) -> Result<SectionAlgebra, SectionError> {
    let sections = enumerate_sections_unchecked(cat);
    let index: HashMap<&Section, usize> = sections.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = sections.len();
    let look = |s: Section, op: &str| -> Result<usize, SectionError> {
        index
            .get(&s)
            .copied()
            .ok_or_else(|| SectionError::NotClosed(format!("{op} gives {}", s.label(cat))))
    };
    let mut compose = Vec::with_capacity(n * n);
    let mut pref = Vec::with_capacity(n * n);
    for a in &sections {
        for b in &sections {
            compose.push(look(sec_compose(cat, a, b), "composition")?);
            pref.push(look(sec_pref(cat, a, b), "preferential union")?);
        }
    }
    let antidomain = sections
        .iter()
        .map(|a| look(sec_antidomain(cat, a), "antidomain"))
        .collect::<Result<Vec<_>, _>>()?;
    let range = sections
        .iter()
        .map(|a| look(sec_range(cat, a), "range"))
        .collect::<Result<Vec<_>, _>>()?;
    let names = sections.iter().map(|s| s.label(cat)).collect();
    let algebra =
        FinAlgebra::from_tables(names, compose, antidomain, range, pref).expect("section tables are well formed");
    Ok(SectionAlgebra {
        category: cat.clone(),
        sections,
        algebra,
    })
}

/// SecCl on a star-coherent F: C → D, as the homomorphism SecCl(D) →
/// SecCl(C) taking a section to its weak preimage under F.
pub fn seccl_morphism_between(
    fun: &MultiFunctor,
    sec_c: &SectionAlgebra,
    sec_d: &SectionAlgebra,
) -> Result<Homomorphism, SectionError> {
    let stars = star_checks(fun);
    if !stars.coherent {
        let failed: Vec<String> = stars
            .report()
            .failures()
            .filter(|(n, _)| n != "pseudo star surjective")
            .map(|(n, v)| format!("{n}: {v}"))
            .collect();
        return Err(SectionError::NotCoherent(failed.join("; ")));
    }
    let m = fun.target.num_arrows();
    let mut map = Vec::with_capacity(sec_d.sections.len());
    for s in &sec_d.sections {
        let pre = fun.preimage(&s.image(m));
        let sec = Section::from_image(&fun.source, &pre)?;
        map.push(sec_c.index_of(&sec).ok_or_else(|| {
            SectionError::NotASection(format!("preimage {} is not enumerated", sec.label(&fun.source)))
        })?);
    }
    Ok(Homomorphism::new(sec_d.algebra.clone(), sec_c.algebra.clone(), map).expect("indices are in range"))
}

pub fn seccl_morphism(fun: &MultiFunctor) -> Result<Homomorphism, SectionError> {
    let sec_c = seccl_object(&fun.source)?;
    let sec_d = seccl_object(&fun.target)?;
    seccl_morphism_between(fun, &sec_c, &sec_d)
}

/// Every least open neighbourhood of an arrow is the image of a section, so
/// the images form a basis of the arrow topology.
pub fn images_form_basis(sec: &SectionAlgebra) -> Verdict {
    let cat = &sec.category;
    let top = cat.arr_topology();
    let m = cat.num_arrows();
    let images: Vec<Subset> = sec.sections.iter().map(|s| s.image(m)).collect();
    for f in 0..m {
        if !images.iter().any(|i| i == top.nbhd(f)) {
            return Verdict::fail(format!(
                "open {} around {} is not a section image",
                cat.arrows_named(top.nbhd(f)),
                cat.arrow_name(f)
            ));
        }
    }
    Verdict::pass()
}
