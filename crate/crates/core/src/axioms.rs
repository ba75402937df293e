//! The ten (quasi)equations axiomatising representable
//! {∘, A, R, ⊔}-algebras, stated once over an abstract [`Signature`] so the
//! same list can be checked against operation tables, concrete partial
//! functions and transducers.

use std::fmt;

/// Interpretation of the signature {∘, A, R, ⊔} over some carrier.
///
/// `same` is the equality used to compare the two sides of an equation; for
/// table algebras it is index equality, for transducers a bounded
/// extensional comparison.
pub trait Signature {
    type Elem: Clone;

    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn antidomain(&self, a: &Self::Elem) -> Self::Elem;
    fn range(&self, a: &Self::Elem) -> Self::Elem;
    fn pref(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// D(a) = A(A(a)).
    fn domain(&self, a: &Self::Elem) -> Self::Elem {
        self.antidomain(&self.antidomain(a))
    }
}

/// One axiom of the finite axiomatisation, numbered as in the standard list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// a∘(b∘c) = (a∘b)∘c
    Assoc,
    /// A(a)∘a = A(b)∘b
    Zero,
    /// id∘a = a, with id = A(A(a)∘a)
    LeftId,
    /// a∘A(b) = A(a∘b)∘a
    AntidomainTwist,
    /// D(a)∘b = D(a)∘c ∧ A(a)∘b = A(a)∘c ⟹ b = c
    Split,
    /// D(R(a)) = R(a)
    RangeDomain,
    /// a∘R(a) = a
    RightRange,
    /// a∘b = a∘c ⟹ R(a)∘b = R(a)∘c
    RangeCancel,
    /// D(a)∘(a⊔b) = a
    PrefLeft,
    /// A(a)∘(a⊔b) = A(a)∘b
    PrefRight,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::Assoc,
        Axiom::Zero,
        Axiom::LeftId,
        Axiom::AntidomainTwist,
        Axiom::Split,
        Axiom::RangeDomain,
        Axiom::RightRange,
        Axiom::RangeCancel,
        Axiom::PrefLeft,
        Axiom::PrefRight,
    ];

    /// 1-based position in the list.
    pub fn number(self) -> usize {
        Axiom::ALL.iter().position(|&a| a == self).unwrap() + 1
    }

    pub fn from_number(n: usize) -> Option<Axiom> {
        n.checked_sub(1).and_then(|i| Axiom::ALL.get(i).copied())
    }

    pub fn arity(self) -> usize {
        match self {
            Axiom::LeftId | Axiom::RangeDomain | Axiom::RightRange => 1,
            Axiom::Zero | Axiom::AntidomainTwist | Axiom::PrefLeft | Axiom::PrefRight => 2,
            Axiom::Assoc | Axiom::Split | Axiom::RangeCancel => 3,
        }
    }

    pub fn is_quasi(self) -> bool {
        matches!(self, Axiom::Split | Axiom::RangeCancel)
    }

    pub fn statement(self) -> &'static str {
        match self {
            Axiom::Assoc => "a∘(b∘c) = (a∘b)∘c",
            Axiom::Zero => "A(a)∘a = A(b)∘b",
            Axiom::LeftId => "id∘a = a",
            Axiom::AntidomainTwist => "a∘A(b) = A(a∘b)∘a",
            Axiom::Split => "D(a)∘b = D(a)∘c ∧ A(a)∘b = A(a)∘c ⟹ b = c",
            Axiom::RangeDomain => "D(R(a)) = R(a)",
            Axiom::RightRange => "a∘R(a) = a",
            Axiom::RangeCancel => "a∘b = a∘c ⟹ R(a)∘b = R(a)∘c",
            Axiom::PrefLeft => "D(a)∘(a⊔b) = a",
            Axiom::PrefRight => "A(a)∘(a⊔b) = A(a)∘b",
        }
    }

    /// Whether this axiom holds at the given instance. `args` must have
    /// exactly `self.arity()` entries.
    pub fn holds_at<S: Signature + ?Sized>(self, sig: &S, args: &[S::Elem]) -> bool {
        assert_eq!(args.len(), self.arity(), "wrong number of arguments for {self}");
        match self {
            Axiom::Assoc => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                let lhs = sig.compose(a, &sig.compose(b, c));
                let rhs = sig.compose(&sig.compose(a, b), c);
                sig.same(&lhs, &rhs)
            }
            Axiom::Zero => {
                let (a, b) = (&args[0], &args[1]);
                let lhs = sig.compose(&sig.antidomain(a), a);
                let rhs = sig.compose(&sig.antidomain(b), b);
                sig.same(&lhs, &rhs)
            }
            Axiom::LeftId => {
                let a = &args[0];
                let zero = sig.compose(&sig.antidomain(a), a);
                let id = sig.antidomain(&zero);
                sig.same(&sig.compose(&id, a), a)
            }
            Axiom::AntidomainTwist => {
                let (a, b) = (&args[0], &args[1]);
                let lhs = sig.compose(a, &sig.antidomain(b));
                let rhs = sig.compose(&sig.antidomain(&sig.compose(a, b)), a);
                sig.same(&lhs, &rhs)
            }
            Axiom::Split => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                let d = sig.domain(a);
                let n = sig.antidomain(a);
                let antecedent = sig.same(&sig.compose(&d, b), &sig.compose(&d, c))
                    && sig.same(&sig.compose(&n, b), &sig.compose(&n, c));
                !antecedent || sig.same(b, c)
            }
            Axiom::RangeDomain => {
                let r = sig.range(&args[0]);
                sig.same(&sig.domain(&r), &r)
            }
            Axiom::RightRange => {
                let a = &args[0];
                sig.same(&sig.compose(a, &sig.range(a)), a)
            }
            Axiom::RangeCancel => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                if !sig.same(&sig.compose(a, b), &sig.compose(a, c)) {
                    return true;
                }
                let r = sig.range(a);
                sig.same(&sig.compose(&r, b), &sig.compose(&r, c))
            }
            Axiom::PrefLeft => {
                let (a, b) = (&args[0], &args[1]);
                let lhs = sig.compose(&sig.domain(a), &sig.pref(a, b));
                sig.same(&lhs, a)
            }
            Axiom::PrefRight => {
                let (a, b) = (&args[0], &args[1]);
                let n = sig.antidomain(a);
                let lhs = sig.compose(&n, &sig.pref(a, b));
                sig.same(&lhs, &sig.compose(&n, b))
            }
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.statement())
    }
}

/// Verdict for one axiom: `witness` holds the first failing instance in
/// lexicographic order of the element list, as positions into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub witness: Option<Vec<usize>>,
}

impl AxiomVerdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(AxiomVerdict::holds)
    }

    pub fn equations_pass(&self) -> bool {
        self.verdicts
            .iter()
            .filter(|v| !v.axiom.is_quasi())
            .all(AxiomVerdict::holds)
    }

    pub fn verdict(&self, axiom: Axiom) -> &AxiomVerdict {
        self.verdicts.iter().find(|v| v.axiom == axiom).unwrap()
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomVerdict> {
        self.verdicts.iter().filter(|v| !v.holds())
    }
}

/// Check every axiom over all tuples drawn from `elems`.
pub fn check_all<S: Signature + ?Sized>(sig: &S, elems: &[S::Elem]) -> AxiomReport {
    let verdicts = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomVerdict {
            axiom,
            witness: first_failure(sig, axiom, elems),
        })
        .collect();
    AxiomReport { verdicts }
}

/// First tuple (lexicographic in positions) at which `axiom` fails.
pub fn first_failure<S: Signature + ?Sized>(sig: &S, axiom: Axiom, elems: &[S::Elem]) -> Option<Vec<usize>> {
    let n = elems.len();
    let arity = axiom.arity();
    if n == 0 {
        return None;
    }
    let mut idx = vec![0usize; arity];
    let mut args: Vec<S::Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
    loop {
        if !axiom.holds_at(sig, &args) {
            return Some(idx);
        }
        // odometer, last position fastest
        let mut pos = arity;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                args[pos] = elems[idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            args[pos] = elems[0].clone();
        }
    }
}
