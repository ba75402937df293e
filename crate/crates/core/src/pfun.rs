//! Concrete partial functions on a finite base set.
//!
//! These are the intended models of the abstract algebras: every law checked
//! elsewhere in the crate can be re-checked here by direct evaluation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::FinAlgebra;
use crate::axioms::Signature;

/// Default cap on the base size accepted by [`enumerate_all`].
pub const DEFAULT_ENUMERATION_CAP: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PfunError {
    #[error("partial functions live on different bases")]
    BaseMismatch,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("relation is not functional at point {0:?}")]
    NotFunctional(String),
    #[error("base has {size} points, enumeration cap is {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("closure needs at least one generator")]
    NoGenerators,
    #[error("set is not closed: {op}({operands}) is missing")]
    NotClosed { op: &'static str, operands: String },
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("{0} and {1} are incompatible")]
    Incompatible(String, String),
}

/// The finite set the functions act on, with labelled points in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base {
    points: Vec<String>,
}

impl Base {
    pub fn new<I, S>(points: I) -> Result<Arc<Base>, PfunError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(PfunError::DuplicatePoint(p.clone()));
            }
        }
        Ok(Arc::new(Base { points }))
    }

    /// Base with points labelled `1..=n`.
    pub fn numbered(n: usize) -> Arc<Base> {
        Arc::new(Base {
            points: (1..=n).map(|i| i.to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }
}

/// A partial function on a [`Base`], stored as its graph: `graph[x]` is the
/// image of point `x`, if defined.
///
/// The derived order compares graphs lexicographically with "undefined"
/// before any defined value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PFunc {
    graph: Vec<Option<usize>>,
    base: Arc<Base>,
}

impl PFunc {
    pub fn from_graph(base: &Arc<Base>, graph: Vec<Option<usize>>) -> PFunc {
        assert_eq!(graph.len(), base.len(), "graph length must match base");
        assert!(
            graph.iter().flatten().all(|&y| y < base.len()),
            "graph values must be points of the base"
        );
        PFunc {
            graph,
            base: Arc::clone(base),
        }
    }

    /// Build from labelled pairs; rejects unknown points and non-functional
    /// relations.
    pub fn from_pairs<S: AsRef<str>>(base: &Arc<Base>, pairs: &[(S, S)]) -> Result<PFunc, PfunError> {
        let mut graph = vec![None; base.len()];
        for (x, y) in pairs {
            let (x, y) = (x.as_ref(), y.as_ref());
            let xi = base.index_of(x).ok_or_else(|| PfunError::UnknownPoint(x.to_string()))?;
            let yi = base.index_of(y).ok_or_else(|| PfunError::UnknownPoint(y.to_string()))?;
            match graph[xi] {
                Some(prev) if prev != yi => return Err(PfunError::NotFunctional(x.to_string())),
                _ => graph[xi] = Some(yi),
            }
        }
        Ok(PFunc {
            graph,
            base: Arc::clone(base),
        })
    }

    pub fn empty(base: &Arc<Base>) -> PFunc {
        PFunc::from_graph(base, vec![None; base.len()])
    }

    pub fn identity(base: &Arc<Base>) -> PFunc {
        PFunc::from_graph(base, (0..base.len()).map(Some).collect())
    }

    /// Identity restricted to the points for which `keep` is true.
    pub fn identity_on(base: &Arc<Base>, keep: impl Fn(usize) -> bool) -> PFunc {
        PFunc::from_graph(base, (0..base.len()).map(|x| keep(x).then_some(x)).collect())
    }

    pub fn base(&self) -> &Arc<Base> {
        &self.base
    }

    pub fn graph(&self) -> &[Option<usize>] {
        &self.graph
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.graph[x]
    }

    pub fn is_defined(&self, x: usize) -> bool {
        self.graph[x].is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.iter().all(Option::is_none)
    }

    fn same_base(&self, other: &PFunc) -> Result<(), PfunError> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(PfunError::BaseMismatch)
        }
    }

    fn zip(&self, other: &PFunc, f: impl Fn(usize, Option<usize>, Option<usize>) -> Option<usize>) -> PFunc {
        let graph = (0..self.graph.len())
            .map(|x| f(x, self.graph[x], other.graph[x]))
            .collect();
        PFunc {
            graph,
            base: Arc::clone(&self.base),
        }
    }
}

impl fmt::Display for PFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (x, y) in self.graph.iter().enumerate() {
            if let Some(y) = y {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{}->{}", self.base.points[x], self.base.points[*y])?;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `f ∘ g`, first `f` then `g`: x ↦ g(f(x)).
pub fn compose(f: &PFunc, g: &PFunc) -> Result<PFunc, PfunError> {
    f.same_base(g)?;
    Ok(f.zip(g, |_, fx, _| fx.and_then(|y| g.graph[y])))
}

/// Identity on the points where `f` is undefined.
pub fn antidomain(f: &PFunc) -> PFunc {
    PFunc::identity_on(&f.base, |x| f.graph[x].is_none())
}

/// Identity on the image of `f`.
pub fn range(f: &PFunc) -> PFunc {
    let mut hit = vec![false; f.base.len()];
    for y in f.graph.iter().flatten() {
        hit[*y] = true;
    }
    PFunc::identity_on(&f.base, |x| hit[x])
}

/// Identity on the points where `f` is defined.
pub fn domain(f: &PFunc) -> PFunc {
    PFunc::identity_on(&f.base, |x| f.graph[x].is_some())
}

/// `f ⊔ g`: f where defined, otherwise g.
pub fn pref_union(f: &PFunc, g: &PFunc) -> Result<PFunc, PfunError> {
    f.same_base(g)?;
    Ok(f.zip(g, |_, fx, gx| fx.or(gx)))
}

/// Graph inclusion.
pub fn leq(f: &PFunc, g: &PFunc) -> Result<bool, PfunError> {
    f.same_base(g)?;
    Ok(f.graph.iter().zip(&g.graph).all(|(fx, gx)| fx.is_none() || fx == gx))
}

/// Agreement on the common domain.
pub fn compatible(f: &PFunc, g: &PFunc) -> Result<bool, PfunError> {
    f.same_base(g)?;
    Ok(f.graph
        .iter()
        .zip(&g.graph)
        .all(|(fx, gx)| fx.is_none() || gx.is_none() || fx == gx))
}

/// Union of two compatible functions.
pub fn join_compatible(f: &PFunc, g: &PFunc) -> Result<PFunc, PfunError> {
    if !compatible(f, g)? {
        return Err(PfunError::Incompatible(f.to_string(), g.to_string()));
    }
    pref_union(f, g)
}

/// All `(n+1)^n` partial functions on `base`, in lexicographic graph order.
pub fn enumerate_all(base: &Arc<Base>) -> Result<Vec<PFunc>, PfunError> {
    enumerate_all_capped(base, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_all_capped(base: &Arc<Base>, cap: usize) -> Result<Vec<PFunc>, PfunError> {
    let n = base.len();
    if n > cap {
        return Err(PfunError::CapExceeded { size: n, cap });
    }
    let total = (n + 1).pow(n as u32);
    let mut out = Vec::with_capacity(total);
    // digit 0 = undefined, digit y+1 = maps to y; most significant digit first
    for code in 0..total {
        let mut graph = vec![None; n];
        let mut rest = code;
        for x in (0..n).rev() {
            let digit = rest % (n + 1);
            rest /= n + 1;
            graph[x] = digit.checked_sub(1);
        }
        out.push(PFunc::from_graph(base, graph));
    }
    Ok(out)
}

/// Least superset of `gens` closed under ∘, A, R and ⊔, sorted.
pub fn close_under_ops(gens: &[PFunc]) -> Result<Vec<PFunc>, PfunError> {
    let first = gens.first().ok_or(PfunError::NoGenerators)?;
    for g in gens {
        first.same_base(g)?;
    }
    let mut found: BTreeSet<PFunc> = BTreeSet::new();
    let mut order: Vec<PFunc> = Vec::new();
    let push = |f: PFunc, found: &mut BTreeSet<PFunc>, order: &mut Vec<PFunc>| {
        if found.insert(f.clone()) {
            order.push(f);
        }
    };
    for g in gens {
        push(g.clone(), &mut found, &mut order);
    }
    // `order[..done]` has been combined with everything before it
    let mut done = 0;
    while done < order.len() {
        let f = order[done].clone();
        push(antidomain(&f), &mut found, &mut order);
        push(range(&f), &mut found, &mut order);
        for i in 0..=done {
            let g = order[i].clone();
            for (x, y) in [(&f, &g), (&g, &f)] {
                push(compose(x, y)?, &mut found, &mut order);
                push(pref_union(x, y)?, &mut found, &mut order);
            }
        }
        done += 1;
    }
    Ok(found.into_iter().collect())
}

/// Operation tables of a closed set of partial functions. Element `i` of the
/// result is `elems[i]`; names default to the Display form of each function.
pub fn as_abstract(elems: &[PFunc], names: Option<&[String]>) -> Result<(FinAlgebra, Vec<PFunc>), PfunError> {
    let n = elems.len();
    if let Some(names) = names {
        if names.len() != n {
            return Err(PfunError::NameCount {
                expected: n,
                got: names.len(),
            });
        }
    }
    let first = elems.first().ok_or(PfunError::NoGenerators)?;
    let mut index: HashMap<&PFunc, usize> = HashMap::with_capacity(n);
    for (i, f) in elems.iter().enumerate() {
        first.same_base(f)?;
        if index.insert(f, i).is_some() {
            return Err(PfunError::DuplicateElement(f.to_string()));
        }
    }
    let name_of = |i: usize| -> String { names.map_or_else(|| elems[i].to_string(), |ns| ns[i].clone()) };
    let lookup = |f: PFunc, op: &'static str, operands: &[usize]| -> Result<usize, PfunError> {
        index.get(&f).copied().ok_or_else(|| PfunError::NotClosed {
            op,
            operands: operands.iter().map(|&i| name_of(i)).collect::<Vec<_>>().join(", "),
        })
    };
    let mut compose_t = Vec::with_capacity(n * n);
    let mut pref_t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            compose_t.push(lookup(compose(&elems[a], &elems[b])?, "compose", &[a, b])?);
        }
    }
    for a in 0..n {
        for b in 0..n {
            pref_t.push(lookup(pref_union(&elems[a], &elems[b])?, "pref", &[a, b])?);
        }
    }
    let mut anti_t = Vec::with_capacity(n);
    let mut range_t = Vec::with_capacity(n);
    for (a, f) in elems.iter().enumerate() {
        anti_t.push(lookup(antidomain(f), "antidomain", &[a])?);
    }
    for (a, f) in elems.iter().enumerate() {
        range_t.push(lookup(range(f), "range", &[a])?);
    }
    let names: Vec<String> = (0..n).map(name_of).collect();
    let alg = FinAlgebra::from_tables(names, compose_t, anti_t, range_t, pref_t)
        .expect("tables built from a closed set are well formed");
    Ok((alg, elems.to_vec()))
}

/// Direct evaluation of the signature on partial functions over one base.
#[derive(Clone, Copy, Debug, Default)]
pub struct Concrete;

impl Signature for Concrete {
    type Elem = PFunc;

    fn compose(&self, a: &PFunc, b: &PFunc) -> PFunc {
        compose(a, b).expect("elements share a base")
    }

    fn antidomain(&self, a: &PFunc) -> PFunc {
        antidomain(a)
    }

    fn range(&self, a: &PFunc) -> PFunc {
        range(a)
    }

    fn pref(&self, a: &PFunc, b: &PFunc) -> PFunc {
        pref_union(a, b).expect("elements share a base")
    }

    fn same(&self, a: &PFunc, b: &PFunc) -> bool {
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn ex1() -> Vec<PFunc> {
        samples::ex1_functions().1
    }

    fn get(name: &str) -> PFunc {
        let (names, fs) = samples::ex1_functions();
        fs[names.iter().position(|n| n == name).unwrap()].clone()
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&get("s"), &get("c")).unwrap(), get("c"));
        assert_eq!(compose(&get("c"), &get("s")).unwrap(), get("0"));
        for f in ex1() {
            assert!(compose(&f, &get("0")).unwrap().is_empty());
        }
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let f = PFunc::identity(&Base::numbered(2));
        let g = PFunc::identity(&Base::numbered(3));
        assert_eq!(compose(&f, &g), Err(PfunError::BaseMismatch));
        assert_eq!(pref_union(&f, &g), Err(PfunError::BaseMismatch));
    }

    #[test]
    fn antidomain_and_range_examples() {
        let base = get("s").base().clone();
        assert_eq!(antidomain(&get("s")), get("e3"));
        assert_eq!(antidomain(&PFunc::empty(&base)), PFunc::identity(&base));
        assert!(antidomain(&PFunc::identity(&base)).is_empty());
        assert_eq!(range(&get("c")), get("e3"));
        assert!(range(&PFunc::empty(&base)).is_empty());
        assert_eq!(range(&get("s3")), get("1"));
    }

    #[test]
    fn pref_union_examples() {
        assert_eq!(pref_union(&get("s"), &get("e3")).unwrap(), get("s3"));
        assert_eq!(pref_union(&get("c"), &get("s")).unwrap(), get("c"));
        for f in ex1() {
            assert_eq!(pref_union(&f, &get("0")).unwrap(), f);
            assert_eq!(pref_union(&get("0"), &f).unwrap(), f);
        }
    }

    #[test]
    fn order_and_compatibility_examples() {
        assert_eq!(domain(&get("c")), get("e12"));
        assert!(leq(&get("e12"), &get("1")).unwrap());
        assert!(!compatible(&get("s"), &get("c")).unwrap());
        assert_eq!(join_compatible(&get("e12"), &get("e3")).unwrap(), get("1"));
        assert!(matches!(
            join_compatible(&get("s"), &get("c")),
            Err(PfunError::Incompatible(..))
        ));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_all(&Base::numbered(0)).unwrap().len(), 1);
        assert_eq!(enumerate_all(&Base::numbered(1)).unwrap().len(), 2);
        let two = enumerate_all(&Base::numbered(2)).unwrap();
        assert_eq!(two.len(), 9);
        assert!(two.windows(2).all(|w| w[0] < w[1]));
        assert!(two[0].is_empty());
        assert_eq!(
            enumerate_all(&Base::numbered(5)),
            Err(PfunError::CapExceeded { size: 5, cap: 4 })
        );
        assert_eq!(enumerate_all_capped(&Base::numbered(5), 5).unwrap().len(), 7776);
    }

    #[test]
    fn closure_examples() {
        let mut expected = ex1();
        expected.sort();
        assert_eq!(close_under_ops(&[get("s"), get("c"), get("1")]).unwrap(), expected);

        let sub = close_under_ops(&[get("s"), get("1")]).unwrap();
        let mut ex1b: Vec<PFunc> = ["0", "e12", "e3", "1", "s", "s3"].iter().map(|n| get(n)).collect();
        ex1b.sort();
        assert_eq!(sub, ex1b);

        assert_eq!(close_under_ops(&[]), Err(PfunError::NoGenerators));
        // any single generator already produces the empty function
        let base = Base::numbered(2);
        let single = close_under_ops(&[PFunc::identity(&base)]).unwrap();
        assert!(single.iter().any(PFunc::is_empty));
    }

    #[test]
    fn as_abstract_examples() {
        let (names, fs) = samples::ex1_functions();
        let (alg, labels) = as_abstract(&fs, Some(&names)).unwrap();
        assert_eq!(alg.len(), 8);
        assert_eq!(labels, fs);
        let s = alg.index_of("s").unwrap();
        assert_eq!(alg.name(alg.compose(s, s)), "e12");

        let base = Base::numbered(0);
        let (one, _) = as_abstract(&[PFunc::empty(&base)], None).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(
            (one.compose(0, 0), one.antidomain(0), one.range(0), one.pref(0, 0)),
            (0, 0, 0, 0)
        );

        let not_closed = vec![get("s"), get("1")];
        match as_abstract(&not_closed, None) {
            Err(PfunError::NotClosed { op, .. }) => assert_eq!(op, "compose"),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn pref_union_is_not_commutative() {
        let fs = enumerate_all(&Base::numbered(2)).unwrap();
        let witness = fs.iter().any(|f| {
            fs.iter()
                .any(|g| pref_union(f, g).unwrap() != pref_union(g, f).unwrap())
        });
        assert!(witness);
    }
}
