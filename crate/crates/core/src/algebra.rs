//! Finite {∘, A, R, ⊔}-algebras given by operation tables.
//!
//! [`FinAlgebra`] holds raw tables and makes no promises. [`Representable`]
//! is a table algebra that has passed the axiom check; it caches the derived
//! order, the domain elements and the atoms, and is what the filter and
//! duality code works over.

use std::fmt;

use thiserror::Error;

use crate::axioms::{self, AxiomReport, Signature};
use crate::filters;
use crate::subset::Subset;
use crate::Verdict;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebras are nonempty")]
    Empty,
    #[error("table {table} has {got} entries, expected {expected}")]
    TableSize {
        table: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("table {table} has out-of-range entry {value}")]
    EntryOutOfRange { table: &'static str, value: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("no zero: A(a)∘a differs between {a} and {b}")]
    NoZero { a: String, b: String },
    #[error("algebra is not representable: {0}")]
    NotRepresentable(String),
    #[error("{a} and {b} have no upper bound")]
    NoUpperBound { a: String, b: String },
    #[error("map has {got} entries, source has {expected} elements")]
    MapSize { expected: usize, got: usize },
    #[error("map value {0} is not an element of the target")]
    MapOutOfRange(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Which operation table an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    Compose,
    Antidomain,
    Range,
    Pref,
}

/// A finite algebra of the signature {∘, A, R, ⊔} as operation tables over
/// element indices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAlgebra {
    names: Vec<String>,
    compose_t: Vec<usize>,
    anti_t: Vec<usize>,
    range_t: Vec<usize>,
    pref_t: Vec<usize>,
}

fn check_len(table: &'static str, t: &[usize], expected: usize, n: usize) -> Result<(), AlgebraError> {
    if t.len() != expected {
        return Err(AlgebraError::TableSize {
            table,
            expected,
            got: t.len(),
        });
    }
    if let Some(&value) = t.iter().find(|&&v| v >= n) {
        return Err(AlgebraError::EntryOutOfRange { table, value });
    }
    Ok(())
}

impl FinAlgebra {
    /// Binary tables are row-major: entry `a*n + b` is `a op b`.
    pub fn from_tables(
        names: Vec<String>,
        compose: Vec<usize>,
        antidomain: Vec<usize>,
        range: Vec<usize>,
        pref: Vec<usize>,
    ) -> Result<FinAlgebra, AlgebraError> {
        let n = names.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        check_len("compose", &compose, n * n, n)?;
        check_len("antidomain", &antidomain, n, n)?;
        check_len("range", &range, n, n)?;
        check_len("pref", &pref, n * n, n)?;
        Ok(FinAlgebra {
            names,
            compose_t: compose,
            anti_t: antidomain,
            range_t: range,
            pref_t: pref,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn element(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index_of(name)
            .ok_or_else(|| AlgebraError::UnknownElement(name.to_string()))
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.compose_t[a * self.len() + b]
    }

    pub fn antidomain(&self, a: usize) -> usize {
        self.anti_t[a]
    }

    pub fn range(&self, a: usize) -> usize {
        self.range_t[a]
    }

    pub fn pref(&self, a: usize, b: usize) -> usize {
        self.pref_t[a * self.len() + b]
    }

    pub fn domain(&self, a: usize) -> usize {
        self.antidomain(self.antidomain(a))
    }

    pub fn compose_table(&self) -> &[usize] {
        &self.compose_t
    }

    pub fn antidomain_table(&self) -> &[usize] {
        &self.anti_t
    }

    pub fn range_table(&self) -> &[usize] {
        &self.range_t
    }

    pub fn pref_table(&self) -> &[usize] {
        &self.pref_t
    }

    /// Number of entries in a table.
    pub fn table_len(&self, table: Table) -> usize {
        match table {
            Table::Compose | Table::Pref => self.len() * self.len(),
            Table::Antidomain | Table::Range => self.len(),
        }
    }

    pub fn entry(&self, table: Table, pos: usize) -> usize {
        match table {
            Table::Compose => self.compose_t[pos],
            Table::Antidomain => self.anti_t[pos],
            Table::Range => self.range_t[pos],
            Table::Pref => self.pref_t[pos],
        }
    }

    /// Copy with a single table entry overwritten.
    pub fn with_entry(&self, table: Table, pos: usize, value: usize) -> FinAlgebra {
        assert!(value < self.len());
        let mut out = self.clone();
        match table {
            Table::Compose => out.compose_t[pos] = value,
            Table::Antidomain => out.anti_t[pos] = value,
            Table::Range => out.range_t[pos] = value,
            Table::Pref => out.pref_t[pos] = value,
        }
        out
    }

    /// Copy with the ⊔ table replaced.
    pub fn with_pref_table(&self, pref: Vec<usize>) -> Result<FinAlgebra, AlgebraError> {
        FinAlgebra::from_tables(
            self.names.clone(),
            self.compose_t.clone(),
            self.anti_t.clone(),
            self.range_t.clone(),
            pref,
        )
    }

    /// The {∘, A, R} part, forgetting ⊔.
    pub fn reduct(&self) -> Reduct {
        Reduct {
            names: self.names.clone(),
            compose_t: self.compose_t.clone(),
            anti_t: self.anti_t.clone(),
            range_t: self.range_t.clone(),
        }
    }

    pub fn check_axioms(&self) -> AxiomReport {
        check_axioms(self)
    }
}

impl fmt::Debug for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinAlgebra")
            .field("names", &self.names)
            .finish_non_exhaustive()
    }
}

impl Signature for FinAlgebra {
    type Elem = usize;

    fn compose(&self, a: &usize, b: &usize) -> usize {
        FinAlgebra::compose(self, *a, *b)
    }

    fn antidomain(&self, a: &usize) -> usize {
        FinAlgebra::antidomain(self, *a)
    }

    fn range(&self, a: &usize) -> usize {
        FinAlgebra::range(self, *a)
    }

    fn pref(&self, a: &usize, b: &usize) -> usize {
        FinAlgebra::pref(self, *a, *b)
    }

    fn same(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
}

/// Per-axiom verdicts over all element tuples; witnesses are element
/// indices, first failure in lexicographic order.
pub fn check_axioms(alg: &FinAlgebra) -> AxiomReport {
    let elems: Vec<usize> = alg.elements().collect();
    axioms::check_all(alg, &elems)
}

/// Human-readable rendering of an axiom report with element names.
pub fn describe_report(alg: &FinAlgebra, report: &AxiomReport) -> String {
    report
        .verdicts
        .iter()
        .map(|v| match &v.witness {
            None => format!("{}: pass", v.axiom),
            Some(w) => format!(
                "{}: FAIL at ({})",
                v.axiom,
                w.iter().map(|&i| alg.name(i)).collect::<Vec<_>>().join(", ")
            ),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Derived constants and order of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub zero: usize,
    pub id: usize,
    /// `domain[a]` = D(a).
    pub domain: Vec<usize>,
    /// `leq[a]` = the set of `b` with `a ≤ b`, i.e. D(a)∘b = a.
    pub leq: Vec<Subset>,
}

impl Constants {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }
}

/// 0 = A(a)∘a (required constant), id = A(0), D and ≤.
pub fn derive_constants(alg: &FinAlgebra) -> Result<Constants, AlgebraError> {
    let n = alg.len();
    let zero = alg.compose(alg.antidomain(0), 0);
    if let Some(b) = alg.elements().find(|&b| alg.compose(alg.antidomain(b), b) != zero) {
        return Err(AlgebraError::NoZero {
            a: alg.name(0).to_string(),
            b: alg.name(b).to_string(),
        });
    }
    let id = alg.antidomain(zero);
    let domain: Vec<usize> = alg.elements().map(|a| alg.domain(a)).collect();
    let leq = (0..n)
        .map(|a| Subset::from_iter(n, (0..n).filter(|&b| alg.compose(domain[a], b) == a)))
        .collect();
    Ok(Constants { zero, id, domain, leq })
}

/// Whether `a` is of the form A(b) for some `b`.
pub fn is_domain_element(alg: &FinAlgebra, a: usize) -> bool {
    alg.elements().any(|b| alg.antidomain(b) == a)
}

/// A table algebra that satisfies all ten axioms, hence is isomorphic to an
/// algebra of partial functions. Caches the order and the Boolean algebra of
/// domain elements.
#[derive(Clone, Debug)]
pub struct Representable {
    alg: FinAlgebra,
    consts: Constants,
    below: Vec<Subset>,
    domain_elems: Subset,
    atoms: Vec<usize>,
}

impl Representable {
    pub fn new(alg: FinAlgebra) -> Result<Representable, AlgebraError> {
        let report = check_axioms(&alg);
        if !report.all_pass() {
            let failed: Vec<String> = report.failures().map(|v| v.axiom.number().to_string()).collect();
            return Err(AlgebraError::NotRepresentable(format!(
                "axioms {} fail",
                failed.join(", ")
            )));
        }
        Ok(Representable::assume_checked(alg))
    }

    /// Skip the axiom check. Every other method assumes the axioms hold.
    pub fn assume_checked(alg: FinAlgebra) -> Representable {
        let consts = derive_constants(&alg).expect("representable algebras have a zero");
        let n = alg.len();
        let mut below = vec![Subset::empty(n); n];
        for a in 0..n {
            for b in consts.leq[a].iter() {
                below[b].insert(a);
            }
        }
        let domain_elems = Subset::from_iter(n, alg.elements().filter(|&a| is_domain_element(&alg, a)));
        let atoms = domain_elems
            .iter()
            .filter(|&a| a != consts.zero)
            .filter(|&a| below[a].iter().all(|b| b == a || b == consts.zero))
            .collect();
        Representable {
            alg,
            consts,
            below,
            domain_elems,
            atoms,
        }
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.alg
    }

    pub fn into_algebra(self) -> FinAlgebra {
        self.alg
    }

    pub fn len(&self) -> usize {
        self.alg.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> usize {
        self.consts.zero
    }

    pub fn id(&self) -> usize {
        self.consts.id
    }

    pub fn constants(&self) -> &Constants {
        &self.consts
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.consts.leq(a, b)
    }

    /// `{b | a ≤ b}`.
    pub fn up(&self, a: usize) -> &Subset {
        &self.consts.leq[a]
    }

    /// `{b | b ≤ a}`.
    pub fn down(&self, a: usize) -> &Subset {
        &self.below[a]
    }

    pub fn domain_elements(&self) -> &Subset {
        &self.domain_elems
    }

    pub fn is_domain(&self, a: usize) -> bool {
        self.domain_elems.contains(a)
    }

    /// Minimal nonzero domain elements, in index order.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    /// Greatest lower bound. Lower bounds of a pair are pairwise compatible,
    /// so their ⊔-fold is their union and the meet always exists.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.down(a)
            .intersection(self.down(b))
            .iter()
            .fold(self.zero(), |acc, c| self.alg.pref(acc, c))
    }

    /// Least upper bound, when some upper bound exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        join(&self.alg.reduct(), a, b)
    }

    /// Upward closure of a set of elements.
    pub fn upward_closure(&self, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for a in s.iter() {
            out.union_with(self.up(a));
        }
        out
    }

    /// Upward closure taken inside the domain elements.
    pub fn upward_closure_in_domain(&self, s: &Subset) -> Subset {
        self.upward_closure(s).intersection(&self.domain_elems)
    }
}

/// An algebra of the signature {∘, A, R}; the ⊔-free reduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduct {
    names: Vec<String>,
    compose_t: Vec<usize>,
    anti_t: Vec<usize>,
    range_t: Vec<usize>,
}

impl Reduct {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.compose_t[a * self.len() + b]
    }

    pub fn antidomain(&self, a: usize) -> usize {
        self.anti_t[a]
    }

    pub fn range(&self, a: usize) -> usize {
        self.range_t[a]
    }

    pub fn domain(&self, a: usize) -> usize {
        self.antidomain(self.antidomain(a))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.compose(self.domain(a), b) == a
    }

    /// Attach a ⊔ table.
    pub fn with_pref(&self, pref: Vec<usize>) -> Result<FinAlgebra, AlgebraError> {
        FinAlgebra::from_tables(
            self.names.clone(),
            self.compose_t.clone(),
            self.anti_t.clone(),
            self.range_t.clone(),
            pref,
        )
    }
}

/// D(a)∘b = D(b)∘a.
pub fn compatible(alg: &Reduct, a: usize, b: usize) -> bool {
    alg.compose(alg.domain(a), b) == alg.compose(alg.domain(b), a)
}

pub fn upper_bound(alg: &Reduct, a: usize, b: usize) -> Option<usize> {
    (0..alg.len()).find(|&c| alg.leq(a, c) && alg.leq(b, c))
}

pub fn has_upper_bound(alg: &Reduct, a: usize, b: usize) -> bool {
    upper_bound(alg, a, b).is_some()
}

/// a ∨ b = A(A(a)∘A(b))∘c for any upper bound c.
pub fn join(alg: &Reduct, a: usize, b: usize) -> Option<usize> {
    let c = upper_bound(alg, a, b)?;
    let both_undefined = alg.compose(alg.antidomain(a), alg.antidomain(b));
    Some(alg.compose(alg.antidomain(both_undefined), c))
}

/// Every compatible pair has an upper bound.
pub fn in_class_a(alg: &Reduct) -> bool {
    (0..alg.len()).all(|a| (0..alg.len()).all(|b| !compatible(alg, a, b) || has_upper_bound(alg, a, b)))
}

/// ⊔ recovered from joins: a ⊔ b = a ∨ (A(a)∘b).
pub fn pref_from_join(alg: &Reduct) -> Result<Vec<usize>, AlgebraError> {
    let n = alg.len();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let rest = alg.compose(alg.antidomain(a), b);
            let j = join(alg, a, rest).ok_or_else(|| AlgebraError::NoUpperBound {
                a: alg.name(a).to_string(),
                b: alg.name(rest).to_string(),
            })?;
            table.push(j);
        }
    }
    Ok(table)
}

/// Join of compatible pairs read off ⊔; `None` on incompatible pairs.
pub fn join_from_pref(alg: &FinAlgebra) -> Vec<Option<usize>> {
    let reduct = alg.reduct();
    let n = alg.len();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(compatible(&reduct, a, b).then(|| alg.pref(a, b)));
        }
    }
    table
}

/// An element map between two table algebras. Construction checks only the
/// shape; use [`check_homomorphism`] for the operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: FinAlgebra,
    pub target: FinAlgebra,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source: FinAlgebra, target: FinAlgebra, map: Vec<usize>) -> Result<Homomorphism, AlgebraError> {
        if map.len() != source.len() {
            return Err(AlgebraError::MapSize {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.len()) {
            return Err(AlgebraError::MapOutOfRange(v));
        }
        Ok(Homomorphism { source, target, map })
    }

    /// Build from `(source name, target name)` pairs covering every source
    /// element.
    pub fn from_names<S: AsRef<str>>(
        source: FinAlgebra,
        target: FinAlgebra,
        pairs: &[(S, S)],
    ) -> Result<Homomorphism, AlgebraError> {
        let mut map = vec![None; source.len()];
        for (a, b) in pairs {
            let ai = source.element(a.as_ref())?;
            map[ai] = Some(target.element(b.as_ref())?);
        }
        let map: Option<Vec<usize>> = map.into_iter().collect();
        let map = map.ok_or(AlgebraError::MapSize {
            expected: source.len(),
            got: pairs.len(),
        })?;
        Homomorphism::new(source, target, map)
    }

    /// Map fixing element names; every source name must exist in the target.
    pub fn inclusion(source: FinAlgebra, target: FinAlgebra) -> Result<Homomorphism, AlgebraError> {
        let map = source
            .names()
            .iter()
            .map(|n| target.element(n))
            .collect::<Result<Vec<_>, _>>()?;
        Homomorphism::new(source, target, map)
    }

    pub fn identity(alg: FinAlgebra) -> Homomorphism {
        let map = alg.elements().collect();
        Homomorphism {
            source: alg.clone(),
            target: alg,
            map,
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `self` then `next`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism, AlgebraError> {
        if self.target != next.source {
            return Err(AlgebraError::Inconsistent(
                "composed homomorphisms do not meet".to_string(),
            ));
        }
        let map = self.map.iter().map(|&b| next.map[b]).collect();
        Homomorphism::new(self.source.clone(), next.target.clone(), map)
    }

    /// Inverse map, if the map is a bijection.
    pub fn inverse(&self) -> Option<Homomorphism> {
        if self.source.len() != self.target.len() {
            return None;
        }
        let mut inv = vec![usize::MAX; self.target.len()];
        for (a, &b) in self.map.iter().enumerate() {
            if inv[b] != usize::MAX {
                return None;
            }
            inv[b] = a;
        }
        Some(Homomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }

    /// Inverse image of a subset of the target.
    pub fn preimage(&self, s: &Subset) -> Subset {
        Subset::from_iter(
            self.source.len(),
            self.source.elements().filter(|&a| s.contains(self.map[a])),
        )
    }
}

/// Whether the map commutes with ∘, A, R and ⊔; the witness names the first
/// offending operation and operands.
pub fn check_homomorphism(h: &Homomorphism) -> Verdict {
    let (s, t, m) = (&h.source, &h.target, &h.map);
    for a in s.elements() {
        if m[s.antidomain(a)] != t.antidomain(m[a]) {
            return Verdict::fail(format!("A({})", s.name(a)));
        }
        if m[s.range(a)] != t.range(m[a]) {
            return Verdict::fail(format!("R({})", s.name(a)));
        }
    }
    for a in s.elements() {
        for b in s.elements() {
            if m[s.compose(a, b)] != t.compose(m[a], m[b]) {
                return Verdict::fail(format!("{} ∘ {}", s.name(a), s.name(b)));
            }
            if m[s.pref(a, b)] != t.pref(m[a], m[b]) {
                return Verdict::fail(format!("{} ⊔ {}", s.name(a), s.name(b)));
            }
        }
    }
    Verdict::pass()
}

/// h(a ∨ b) = h(a) ∨ h(b) whenever the source join exists, with joins
/// computed independently on each side by upper-bound search.
pub fn preserves_joins(h: &Homomorphism) -> Verdict {
    let (s, t) = (h.source.reduct(), h.target.reduct());
    for a in 0..s.len() {
        for b in 0..s.len() {
            if let Some(j) = join(&s, a, b) {
                let image = join(&t, h.map[a], h.map[b]);
                if image != Some(h.map[j]) {
                    return Verdict::fail(format!("{} ∨ {}", s.name(a), s.name(b)));
                }
            }
        }
    }
    Verdict::pass()
}

/// Result of the local-properness test: the first prime filter of the target
/// whose inverse image is not a prime filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalProperness {
    pub holds: bool,
    pub witness: Option<Subset>,
}

/// Inverse image of every prime filter of the target is a prime filter of
/// the source.
pub fn check_locally_proper(h: &Homomorphism) -> Result<LocalProperness, AlgebraError> {
    let source = Representable::new(h.source.clone())?;
    let target = Representable::new(h.target.clone())?;
    for p in filters::enumerate_prime_filters(&target) {
        let pre = h.preimage(p.members());
        let prime = filters::is_filter(&source, &pre) && filters::is_prime(&source, &pre).unwrap_or(false);
        if !prime {
            return Ok(LocalProperness {
                holds: false,
                witness: Some(p.members().clone()),
            });
        }
    }
    Ok(LocalProperness {
        holds: true,
        witness: None,
    })
}

/// Bijective homomorphism whose inverse is a homomorphism.
pub fn is_isomorphism(h: &Homomorphism) -> bool {
    check_homomorphism(h).holds && h.inverse().is_some_and(|inv| check_homomorphism(&inv).holds)
}

/// The domain-element sub-universe together with a check of the Boolean
/// algebra laws on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainSubalgebra {
    pub elements: Vec<usize>,
    pub atoms: Vec<usize>,
}

/// D[A] with meet ∘, complement A, bottom 0, top id and join ⊔; errors if
/// any Boolean law fails, which cannot happen for representable input.
pub fn domain_subalgebra(rep: &Representable) -> Result<DomainSubalgebra, AlgebraError> {
    let alg = rep.algebra();
    let d: Vec<usize> = rep.domain_elements().iter().collect();
    let (zero, id) = (rep.zero(), rep.id());
    let bad = |law: &str, w: &[usize]| {
        AlgebraError::Inconsistent(format!(
            "Boolean law {law} fails at ({})",
            w.iter().map(|&i| alg.name(i)).collect::<Vec<_>>().join(", ")
        ))
    };
    let is_d = |x: usize| rep.is_domain(x);
    for &a in &d {
        if !is_d(alg.range(a)) || alg.range(a) != a {
            return Err(bad("R(α) = α", &[a]));
        }
        if alg.compose(a, a) != a {
            return Err(bad("α∘α = α", &[a]));
        }
        if alg.compose(a, alg.antidomain(a)) != zero {
            return Err(bad("α∘A(α) = 0", &[a]));
        }
        if alg.pref(a, alg.antidomain(a)) != id {
            return Err(bad("α ⊔ A(α) = id", &[a]));
        }
        if alg.compose(zero, a) != zero || alg.compose(id, a) != a {
            return Err(bad("bounds", &[a]));
        }
        for &b in &d {
            let m = alg.compose(a, b);
            let j = alg.pref(a, b);
            if !is_d(m) || !is_d(j) {
                return Err(bad("closure", &[a, b]));
            }
            if m != alg.compose(b, a) || j != alg.pref(b, a) {
                return Err(bad("commutativity", &[a, b]));
            }
            if j != alg.antidomain(alg.compose(alg.antidomain(a), alg.antidomain(b))) {
                return Err(bad("De Morgan", &[a, b]));
            }
            if alg.compose(a, j) != a || alg.pref(a, m) != a {
                return Err(bad("absorption", &[a, b]));
            }
            for &c in &d {
                if alg.compose(a, alg.pref(b, c)) != alg.pref(m, alg.compose(a, c)) {
                    return Err(bad("distributivity", &[a, b, c]));
                }
            }
        }
    }
    Ok(DomainSubalgebra {
        elements: d,
        atoms: rep.atoms().to_vec(),
    })
}

/// All homomorphisms from `source` to `target`, in lexicographic order of
/// their maps. Backtracking with forward propagation through the tables.
pub fn enumerate_homomorphisms(source: &FinAlgebra, target: &FinAlgebra) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let map = vec![None; source.len()];
    search_homs(source, target, &map, &mut out);
    out
}

fn propagate(s: &FinAlgebra, t: &FinAlgebra, map: &mut [Option<usize>]) -> bool {
    let n = s.len();
    loop {
        let mut changed = false;
        let force = |x: usize, v: usize, map: &mut [Option<usize>], changed: &mut bool| -> bool {
            match map[x] {
                Some(w) => w == v,
                None => {
                    map[x] = Some(v);
                    *changed = true;
                    true
                }
            }
        };
        for a in 0..n {
            let Some(ha) = map[a] else { continue };
            if !force(s.antidomain(a), t.antidomain(ha), map, &mut changed)
                || !force(s.range(a), t.range(ha), map, &mut changed)
            {
                return false;
            }
            for b in 0..n {
                let Some(hb) = map[b] else { continue };
                if !force(s.compose(a, b), t.compose(ha, hb), map, &mut changed)
                    || !force(s.pref(a, b), t.pref(ha, hb), map, &mut changed)
                {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search_homs(s: &FinAlgebra, t: &FinAlgebra, map: &[Option<usize>], out: &mut Vec<Vec<usize>>) {
    let Some(next) = map.iter().position(Option::is_none) else {
        out.push(map.iter().map(|v| v.unwrap()).collect());
        return;
    };
    for v in t.elements() {
        let mut trial = map.to_vec();
        trial[next] = Some(v);
        if propagate(s, t, &mut trial) {
            search_homs(s, t, &trial, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::Axiom;
    use crate::samples;

    #[test]
    fn constants_of_running_example() {
        let ex1 = samples::ex1();
        let c = derive_constants(&ex1).unwrap();
        assert_eq!(ex1.name(c.zero), "0");
        assert_eq!(ex1.name(c.id), "1");
        assert_eq!(ex1.name(c.domain[ex1.index_of("c").unwrap()]), "e12");
        let b = samples::ex1b();
        let cb = derive_constants(&b).unwrap();
        assert_eq!((b.name(cb.zero), b.name(cb.id)), ("0", "1"));
        let one = samples::one_element();
        let c1 = derive_constants(&one).unwrap();
        assert_eq!((c1.zero, c1.id), (0, 0));
    }

    #[test]
    fn no_zero_is_reported() {
        let ex1 = samples::ex1();
        let s = ex1.index_of("s").unwrap();
        let bad = ex1.with_entry(Table::Antidomain, s, ex1.index_of("1").unwrap());
        assert!(matches!(derive_constants(&bad), Err(AlgebraError::NoZero { .. })));
        assert!(!check_axioms(&bad).verdict(Axiom::Zero).holds());
    }

    #[test]
    fn running_example_satisfies_all_axioms() {
        assert!(check_axioms(&samples::ex1()).all_pass());
        assert!(check_axioms(&samples::ex1b()).all_pass());
        assert!(check_axioms(&samples::one_element()).all_pass());
    }

    #[test]
    fn mutated_range_breaks_right_range_law() {
        let ex1 = samples::ex1();
        let s = ex1.index_of("s").unwrap();
        let bad = ex1.with_entry(Table::Range, s, 0);
        let report = check_axioms(&bad);
        assert_eq!(report.verdict(Axiom::RightRange).witness, Some(vec![s]));
    }

    #[test]
    fn mutated_pref_breaks_left_pref_law() {
        let ex1 = samples::ex1();
        let (s, c) = (ex1.index_of("s").unwrap(), ex1.index_of("c").unwrap());
        let bad = ex1.with_entry(Table::Pref, s * ex1.len() + c, 0);
        let report = check_axioms(&bad);
        assert_eq!(report.verdict(Axiom::PrefLeft).witness, Some(vec![s, c]));
    }

    #[test]
    fn domain_elements_form_boolean_algebra() {
        let ex1 = Representable::new(samples::ex1()).unwrap();
        let d = domain_subalgebra(&ex1).unwrap();
        let names: Vec<&str> = d.elements.iter().map(|&i| ex1.algebra().name(i)).collect();
        assert_eq!(names, vec!["0", "e12", "e3", "1"]);
        let atoms: Vec<&str> = d.atoms.iter().map(|&i| ex1.algebra().name(i)).collect();
        assert_eq!(atoms, vec!["e12", "e3"]);
        assert!(is_domain_element(ex1.algebra(), ex1.algebra().index_of("e3").unwrap()));
        assert!(!is_domain_element(ex1.algebra(), ex1.algebra().index_of("s").unwrap()));

        let one = Representable::new(samples::one_element()).unwrap();
        assert_eq!(domain_subalgebra(&one).unwrap().elements, vec![0]);

        let b = Representable::new(samples::ex1b()).unwrap();
        let names: Vec<&str> = domain_subalgebra(&b)
            .unwrap()
            .elements
            .iter()
            .map(|&i| b.algebra().name(i))
            .collect();
        assert_eq!(names, vec!["0", "e12", "e3", "1"]);
    }

    #[test]
    fn joins_and_class_a() {
        let ex1 = samples::ex1();
        let r = ex1.reduct();
        let e = |n: &str| ex1.index_of(n).unwrap();
        assert_eq!(join(&r, e("e12"), e("e3")), Some(e("1")));
        for a in ex1.elements() {
            assert_eq!(join(&r, a, a), Some(a));
        }
        assert!(!compatible(&r, e("s"), e("c")));
        assert!(in_class_a(&r));
    }

    #[test]
    fn pref_and_join_translate_both_ways() {
        let ex1 = samples::ex1();
        let rebuilt = pref_from_join(&ex1.reduct()).unwrap();
        assert_eq!(rebuilt, ex1.pref_table());
        let joins = join_from_pref(&ex1);
        let e = |n: &str| ex1.index_of(n).unwrap();
        let n = ex1.len();
        assert_eq!(joins[e("e12") * n + e("e3")], Some(e("1")));
        assert_eq!(joins[e("s") * n + e("c")], None);
    }

    #[test]
    fn homomorphism_examples() {
        let incl = samples::ex1b_inclusion();
        assert!(check_homomorphism(&incl).holds);
        assert!(preserves_joins(&incl).holds);
        assert!(check_homomorphism(&Homomorphism::identity(samples::ex1())).holds);

        let ex1 = samples::ex1();
        let b = samples::ex1b();
        let pairs = [
            ("0", "0"),
            ("e12", "e12"),
            ("e3", "e3"),
            ("1", "1"),
            ("s", "c"),
            ("s3", "c3"),
        ];
        let bad = Homomorphism::from_names(b, ex1, &pairs).unwrap();
        assert!(!check_homomorphism(&bad).holds);
    }

    #[test]
    fn local_properness_examples() {
        let id = Homomorphism::identity(samples::ex1());
        assert!(check_locally_proper(&id).unwrap().holds);

        let incl = samples::ex1b_inclusion();
        let lp = check_locally_proper(&incl).unwrap();
        assert!(!lp.holds);
        let ex1 = samples::ex1();
        let c = ex1.index_of("c").unwrap();
        let c3 = ex1.index_of("c3").unwrap();
        assert_eq!(lp.witness.unwrap().to_vec(), vec![c, c3]);

        let one = Homomorphism::identity(samples::one_element());
        assert!(check_locally_proper(&one).unwrap().holds);
    }

    #[test]
    fn homomorphism_enumeration_finds_identity_and_inclusion() {
        let ex1 = samples::ex1();
        let homs = enumerate_homomorphisms(&ex1, &ex1);
        assert!(homs.contains(&ex1.elements().collect()));
        for m in &homs {
            let h = Homomorphism::new(ex1.clone(), ex1.clone(), m.clone()).unwrap();
            assert!(check_homomorphism(&h).holds);
        }
        let incl = samples::ex1b_inclusion();
        let into = enumerate_homomorphisms(&incl.source, &incl.target);
        assert!(into.contains(&incl.map));
    }
}
