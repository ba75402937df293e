//! Filters, prime filters and domain ultrafilters of finite representable
//! algebras, with the source/target/composition calculus on prime filters.
//!
//! In a finite representable algebra every filter is principal: it is the
//! up-set of its meet. Enumeration uses that, but the predicates below test
//! the definitions directly.

use thiserror::Error;

use crate::algebra::Representable;
use crate::subset::Subset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("generating set is empty")]
    EmptyGenerators,
    #[error("set is not a filter")]
    NotAFilter,
    #[error("set is not a proper filter")]
    NotProper,
    #[error("set is not an ultrafilter of the domain elements")]
    NotUltrafilter,
    #[error("R({0}) is not in the given ultrafilter")]
    RangeNotInUltrafilter(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// A set of elements of an algebra; whether it is a filter, prime, etc. is
/// decided by the functions of this module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FilterSet {
    members: Subset,
}

impl FilterSet {
    pub fn new(members: Subset) -> FilterSet {
        FilterSet { members }
    }

    pub fn members(&self) -> &Subset {
        &self.members
    }

    pub fn into_members(self) -> Subset {
        self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member names in index order.
    pub fn names<'a>(&self, rep: &'a Representable) -> Vec<&'a str> {
        self.members.iter().map(|a| rep.algebra().name(a)).collect()
    }
}

/// A generated set that either stays proper or collapses by containing 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Proper(FilterSet),
    Improper,
}

impl Generated {
    pub fn is_proper(&self) -> bool {
        matches!(self, Generated::Proper(_))
    }

    pub fn proper(self) -> Option<FilterSet> {
        match self {
            Generated::Proper(f) => Some(f),
            Generated::Improper => None,
        }
    }
}

fn tag(rep: &Representable, s: Subset) -> Generated {
    if s.contains(rep.zero()) {
        Generated::Improper
    } else {
        Generated::Proper(FilterSet::new(s))
    }
}

pub fn upward_closure(rep: &Representable, s: &Subset) -> Subset {
    rep.upward_closure(s)
}

/// Least filter containing `s`: the up-set of the meet of `s`.
pub fn generated_filter(rep: &Representable, s: &Subset) -> Result<Generated, FilterError> {
    let mut it = s.iter();
    let first = it.next().ok_or(FilterError::EmptyGenerators)?;
    let m = it.fold(first, |acc, b| rep.meet(acc, b));
    Ok(tag(rep, rep.up(m).clone()))
}

/// Nonempty, upward closed and downward directed.
pub fn is_filter(rep: &Representable, s: &Subset) -> bool {
    if s.is_empty() || rep.upward_closure(s) != *s {
        return false;
    }
    let members: Vec<usize> = s.iter().collect();
    members.iter().all(|&a| {
        members
            .iter()
            .all(|&b| rep.down(a).intersection(rep.down(b)).iter().any(|c| s.contains(c)))
    })
}

pub fn is_proper_filter(rep: &Representable, s: &Subset) -> bool {
    is_filter(rep, s) && !s.contains(rep.zero())
}

/// A proper filter with a ⊔ b ∈ F ⟹ a ∈ F or b ∈ F. Errors on sets that
/// are not filters; improper filters are not prime.
pub fn is_prime(rep: &Representable, s: &Subset) -> Result<bool, FilterError> {
    if !is_filter(rep, s) {
        return Err(FilterError::NotAFilter);
    }
    if s.contains(rep.zero()) {
        return Ok(false);
    }
    let alg = rep.algebra();
    let n = alg.len();
    for a in 0..n {
        for b in 0..n {
            if s.contains(alg.pref(a, b)) && !s.contains(a) && !s.contains(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A proper filter no proper filter strictly extends, tested by adding each
/// outside element in turn.
pub fn is_maximal(rep: &Representable, s: &Subset) -> Result<bool, FilterError> {
    if !is_filter(rep, s) {
        return Err(FilterError::NotAFilter);
    }
    if s.contains(rep.zero()) {
        return Ok(false);
    }
    for x in 0..rep.len() {
        if s.contains(x) {
            continue;
        }
        let mut bigger = s.clone();
        bigger.insert(x);
        if generated_filter(rep, &bigger)?.is_proper() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All prime filters, ordered by the index of their least element.
pub fn enumerate_prime_filters(rep: &Representable) -> Vec<FilterSet> {
    let mut out: Vec<FilterSet> = Vec::new();
    for m in 0..rep.len() {
        let up = rep.up(m);
        if m == rep.zero() || out.iter().any(|f| f.members() == up) {
            continue;
        }
        if is_prime(rep, up) == Ok(true) {
            out.push(FilterSet::new(up.clone()));
        }
    }
    out
}

/// Whether `s` is an ultrafilter of the Boolean algebra of domain elements.
pub fn is_domain_ultrafilter(rep: &Representable, s: &Subset) -> bool {
    if !s.is_subset(rep.domain_elements()) || s.is_empty() || s.contains(rep.zero()) {
        return false;
    }
    let alg = rep.algebra();
    let d = rep.domain_elements();
    if rep.upward_closure_in_domain(s) != *s {
        return false;
    }
    // meets stay inside, and each α or its complement is present
    s.iter().all(|a| s.iter().all(|b| s.contains(alg.compose(a, b))))
        && d.iter().all(|a| s.contains(a) != s.contains(alg.antidomain(a)))
}

/// Ultrafilters of the domain elements, one per atom, in atom order.
pub fn enumerate_domain_ultrafilters(rep: &Representable) -> Vec<FilterSet> {
    rep.atoms()
        .iter()
        .map(|&a| FilterSet::new(rep.upward_closure_in_domain(&Subset::singleton(rep.len(), a))))
        .collect()
}

fn require_prime(rep: &Representable, p: &FilterSet) -> Result<(), FilterError> {
    match is_prime(rep, p.members())? {
        true => Ok(()),
        false => Err(FilterError::NotProper),
    }
}

fn verified_ultrafilter(rep: &Representable, s: Subset, what: &str) -> Result<FilterSet, FilterError> {
    if is_domain_ultrafilter(rep, &s) {
        Ok(FilterSet::new(s))
    } else {
        Err(FilterError::Inconsistent(format!("{what} is not an ultrafilter")))
    }
}

/// D[P] = {D(a) | a ∈ P}.
pub fn source_of(rep: &Representable, p: &FilterSet) -> Result<FilterSet, FilterError> {
    require_prime(rep, p)?;
    let alg = rep.algebra();
    let s = Subset::from_iter(rep.len(), p.members().iter().map(|a| alg.domain(a)));
    verified_ultrafilter(rep, s, "D[P]")
}

/// R[P]^↑, the closure of {R(a) | a ∈ P} inside the domain elements.
pub fn target_of(rep: &Representable, p: &FilterSet) -> Result<FilterSet, FilterError> {
    require_prime(rep, p)?;
    let alg = rep.algebra();
    let r = Subset::from_iter(rep.len(), p.members().iter().map(|a| alg.range(a)));
    verified_ultrafilter(rep, rep.upward_closure_in_domain(&r), "R[P]^↑")
}

/// (S ∘ T)^↑ for arbitrary element sets.
pub fn product_closure(rep: &Representable, s: &Subset, t: &Subset) -> Subset {
    let alg = rep.algebra();
    let prod = Subset::from_iter(
        rep.len(),
        s.iter().flat_map(|a| t.iter().map(move |b| alg.compose(a, b))),
    );
    rep.upward_closure(&prod)
}

/// (P∘Q)^↑; proper exactly when the target of P is the source of Q.
pub fn compose_filters(rep: &Representable, p: &FilterSet, q: &FilterSet) -> Generated {
    tag(rep, product_closure(rep, p.members(), q.members()))
}

/// (μ∘a)^↑.
pub fn prime_from(rep: &Representable, mu: &FilterSet, a: usize) -> Generated {
    tag(
        rep,
        product_closure(rep, mu.members(), &Subset::singleton(rep.len(), a)),
    )
}

/// A prime filter containing `a` whose target is `mu`: extend D[a∘μ]^↑ to an
/// ultrafilter ν by adding domain elements in index order while the filter
/// stays proper, then take (ν∘a)^↑.
pub fn find_prime_with_range(rep: &Representable, mu: &FilterSet, a: usize) -> Result<FilterSet, FilterError> {
    let alg = rep.algebra();
    if !is_domain_ultrafilter(rep, mu.members()) {
        return Err(FilterError::NotUltrafilter);
    }
    if !mu.contains(alg.range(a)) {
        return Err(FilterError::RangeNotInUltrafilter(alg.name(a).to_string()));
    }
    let seed = Subset::from_iter(rep.len(), mu.members().iter().map(|m| alg.domain(alg.compose(a, m))));
    let mut nu = match generated_filter(rep, &seed)? {
        Generated::Proper(f) => f.into_members().intersection(rep.domain_elements()),
        Generated::Improper => {
            return Err(FilterError::Inconsistent("D[a∘μ] generates an improper filter".into()));
        }
    };
    for x in rep.domain_elements().iter() {
        if nu.contains(x) {
            continue;
        }
        let mut trial = nu.clone();
        trial.insert(x);
        if let Generated::Proper(f) = generated_filter(rep, &trial)? {
            nu = f.into_members().intersection(rep.domain_elements());
        }
    }
    let nu = verified_ultrafilter(rep, nu, "extension")?;
    let p = prime_from(rep, &nu, a)
        .proper()
        .ok_or_else(|| FilterError::Inconsistent("(ν∘a)^↑ is improper".into()))?;
    if !p.contains(a) || target_of(rep, &p)? != *mu {
        return Err(FilterError::Inconsistent(
            "constructed prime filter misses its target".into(),
        ));
    }
    Ok(p)
}

/// Least element of a filter in a finite algebra.
pub fn least_element(rep: &Representable, f: &FilterSet) -> Option<usize> {
    let m = f.members().iter().reduce(|acc, b| rep.meet(acc, b))?;
    f.contains(m).then_some(m)
}
