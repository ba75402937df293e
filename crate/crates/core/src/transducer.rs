//! Rational partial word functions as real-time one-way transducers: every
//! transition reads one input letter and writes a word, and accepting states
//! append a final word. Closed under ∘, A, R and ⊔ by automata constructions;
//! comparisons are by exhaustive evaluation on bounded-length words.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::axioms::{self, AxiomReport, Signature};

/// Default length bound for bounded comparisons.
pub const DEFAULT_MAX_LEN: usize = 8;
/// Largest length bound accepted by default.
pub const DEFAULT_LENGTH_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransducerError {
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),
    #[error("duplicate letter {0:?} in alphabet")]
    DuplicateLetter(char),
    #[error("state {0} does not exist")]
    StateOutOfRange(usize),
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("machines use different alphabets")]
    AlphabetMismatch,
    #[error("not functional on {input:?}: outputs {first:?} and {second:?}")]
    NotFunctional {
        input: String,
        first: String,
        second: String,
    },
    #[error("length bound {len} exceeds cap {cap}")]
    LengthCap { len: usize, cap: usize },
}

/// A complete deterministic automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<char>,
    delta: Vec<Vec<usize>>,
    initial: usize,
    accepting: Vec<bool>,
}

fn check_alphabet(alphabet: &[char]) -> Result<(), TransducerError> {
    for (i, &c) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(&c) {
            return Err(TransducerError::DuplicateLetter(c));
        }
    }
    Ok(())
}

fn letter_index(alphabet: &[char], c: char) -> Result<usize, TransducerError> {
    alphabet
        .iter()
        .position(|&x| x == c)
        .ok_or(TransducerError::UnknownLetter(c))
}

impl Dfa {
    /// `delta[q][i]` is the successor of `q` on `alphabet[i]`.
    pub fn new(
        alphabet: Vec<char>,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Dfa, TransducerError> {
        check_alphabet(&alphabet)?;
        let n = delta.len();
        if initial >= n.max(1) || accepting.len() != n {
            return Err(TransducerError::StateOutOfRange(initial));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(TransducerError::StateOutOfRange(row.len()));
            }
            if let Some(&q) = row.iter().find(|&&q| q >= n) {
                return Err(TransducerError::StateOutOfRange(q));
            }
        }
        Ok(Dfa {
            alphabet,
            delta,
            initial,
            accepting,
        })
    }

    /// Accepts every word.
    pub fn universal(alphabet: Vec<char>) -> Dfa {
        let k = alphabet.len();
        Dfa {
            alphabet,
            delta: vec![vec![0; k]],
            initial: 0,
            accepting: vec![true],
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, letter: usize) -> usize {
        self.delta[q][letter]
    }

    pub fn accepts(&self, word: &str) -> Result<bool, TransducerError> {
        let mut q = self.initial;
        for c in word.chars() {
            q = self.delta[q][letter_index(&self.alphabet, c)?];
        }
        Ok(self.accepting[q])
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }

    /// First word of length at most `max_len`, in shortlex order, on which
    /// the automaton disagrees with `oracle`.
    pub fn disagreement(
        &self,
        oracle: impl Fn(&str) -> bool,
        max_len: usize,
    ) -> Result<Option<String>, TransducerError> {
        for w in words_up_to(&self.alphabet, max_len) {
            if self.accepts(&w)? != oracle(&w) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

/// All words of length at most `max_len` in shortlex order.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let next: Vec<String> = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Subset construction from an NFA with optional ε-moves; the empty set
/// becomes the sink.
fn determinize(
    alphabet: &[char],
    initial: &[usize],
    step: impl Fn(usize, usize) -> Vec<usize>,
    epsilon: impl Fn(usize) -> Vec<usize>,
    accepting: impl Fn(usize) -> bool,
) -> Dfa {
    let closure = |seed: BTreeSet<usize>| -> BTreeSet<usize> {
        let mut set = seed;
        let mut work: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = work.pop() {
            for r in epsilon(q) {
                if set.insert(r) {
                    work.push(r);
                }
            }
        }
        set
    };
    let start = closure(initial.iter().copied().collect());
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut sets: Vec<BTreeSet<usize>> = Vec::new();
    let mut delta: Vec<Vec<usize>> = Vec::new();
    index.insert(start.clone(), 0);
    sets.push(start);
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(alphabet.len());
        for letter in 0..alphabet.len() {
            let next = closure(sets[i].iter().flat_map(|&q| step(q, letter)).collect());
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    index.insert(next.clone(), sets.len());
                    sets.push(next);
                    sets.len() - 1
                }
            };
            row.push(j);
        }
        delta.push(row);
        i += 1;
    }
    let accepting = sets.iter().map(|s| s.iter().any(|&q| accepting(q))).collect();
    Dfa {
        alphabet: alphabet.to_vec(),
        delta,
        initial: 0,
        accepting,
    }
}

/// One transition: in `from`, read `input`, write `output`, go to `to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub from: usize,
    pub input: char,
    pub output: String,
    pub to: usize,
}

impl Transition {
    pub fn new(from: usize, input: char, output: &str, to: usize) -> Transition {
        Transition {
            from,
            input,
            output: output.to_string(),
            to,
        }
    }
}

/// A real-time transducer over a single alphabet used for both input and
/// output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    alphabet: Vec<char>,
    states: Vec<String>,
    initial: usize,
    /// `trans[q][i]`: outputs and successors on `alphabet[i]`, sorted.
    trans: Vec<Vec<Vec<(String, usize)>>>,
    finals: Vec<Option<String>>,
}

impl Transducer {
    pub fn new(
        alphabet: Vec<char>,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
        finals: Vec<(usize, String)>,
    ) -> Result<Transducer, TransducerError> {
        check_alphabet(&alphabet)?;
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(TransducerError::DuplicateState(s.clone()));
            }
        }
        let n = states.len();
        if initial >= n {
            return Err(TransducerError::StateOutOfRange(initial));
        }
        let mut trans = vec![vec![Vec::new(); alphabet.len()]; n];
        for t in transitions {
            if t.from >= n || t.to >= n {
                return Err(TransducerError::StateOutOfRange(t.from.max(t.to)));
            }
            for c in t.output.chars() {
                letter_index(&alphabet, c)?;
            }
            let i = letter_index(&alphabet, t.input)?;
            trans[t.from][i].push((t.output, t.to));
        }
        let mut fin = vec![None; n];
        for (q, w) in finals {
            if q >= n {
                return Err(TransducerError::StateOutOfRange(q));
            }
            for c in w.chars() {
                letter_index(&alphabet, c)?;
            }
            fin[q] = Some(w);
        }
        Ok(Transducer::from_raw(alphabet, Some(states), initial, trans, fin))
    }

    fn from_raw(
        alphabet: Vec<char>,
        states: Option<Vec<String>>,
        initial: usize,
        mut trans: Vec<Vec<Vec<(String, usize)>>>,
        finals: Vec<Option<String>>,
    ) -> Transducer {
        for row in &mut trans {
            for cell in row {
                cell.sort();
                cell.dedup();
            }
        }
        let states = states.unwrap_or_else(|| (0..trans.len()).map(|i| format!("q{i}")).collect());
        Transducer {
            alphabet,
            states,
            initial,
            trans,
            finals,
        }
    }

    /// The identity on every word.
    pub fn identity(alphabet: Vec<char>) -> Transducer {
        identity_on(&Dfa::universal(alphabet))
    }

    /// The function undefined everywhere.
    pub fn empty(alphabet: Vec<char>) -> Transducer {
        let k = alphabet.len();
        Transducer::from_raw(alphabet, None, 0, vec![vec![Vec::new(); k]], vec![None])
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn final_output(&self, q: usize) -> Option<&str> {
        self.finals[q].as_deref()
    }

    /// All transitions, sorted by source state, letter, output, target.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut out = Vec::new();
        for (q, row) in self.trans.iter().enumerate() {
            for (i, cell) in row.iter().enumerate() {
                for (o, r) in cell {
                    out.push(Transition::new(q, self.alphabet[i], o, *r));
                }
            }
        }
        out
    }

    fn same_alphabet(&self, other: &Transducer) -> Result<(), TransducerError> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(TransducerError::AlphabetMismatch)
        }
    }

    /// Configurations `(state, output so far)` after reading `word` from `q`.
    fn run_from(&self, q: usize, word: &str) -> Result<BTreeSet<(usize, String)>, TransducerError> {
        let mut configs: BTreeSet<(usize, String)> = BTreeSet::new();
        configs.insert((q, String::new()));
        for c in word.chars() {
            let i = letter_index(&self.alphabet, c)?;
            let mut next = BTreeSet::new();
            for (p, out) in &configs {
                for (o, r) in &self.trans[*p][i] {
                    next.insert((*r, format!("{out}{o}")));
                }
            }
            configs = next;
            if configs.is_empty() {
                break;
            }
        }
        Ok(configs)
    }

    /// Output on `word`, `None` if no run accepts. Distinct outputs on
    /// accepting runs are an error.
    pub fn eval(&self, word: &str) -> Result<Option<String>, TransducerError> {
        let configs = self.run_from(self.initial, word)?;
        let mut result: Option<String> = None;
        for (q, out) in configs {
            if let Some(f) = &self.finals[q] {
                let w = format!("{out}{f}");
                match &result {
                    Some(prev) if *prev != w => {
                        return Err(TransducerError::NotFunctional {
                            input: word.to_string(),
                            first: prev.clone(),
                            second: w,
                        })
                    }
                    _ => result = Some(w),
                }
            }
        }
        Ok(result)
    }

    /// Drop states that are unreachable or cannot reach an accepting state;
    /// the initial state is always kept.
    pub fn trim(&self) -> Transducer {
        let n = self.num_states();
        let mut reach = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        reach[self.initial] = true;
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        while let Some(q) = queue.pop_front() {
            for cell in &self.trans[q] {
                for (_, r) in cell {
                    preds[*r].push(q);
                    if !reach[*r] {
                        reach[*r] = true;
                        queue.push_back(*r);
                    }
                }
            }
        }
        let mut co = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| reach[q] && self.finals[q].is_some()).collect();
        for &q in &queue {
            co[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !co[p] {
                    co[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&q| q == self.initial || (reach[q] && co[q])).collect();
        let mut new_index = vec![usize::MAX; n];
        for (i, &q) in keep.iter().enumerate() {
            new_index[q] = i;
        }
        let trans = keep
            .iter()
            .map(|&q| {
                self.trans[q]
                    .iter()
                    .map(|cell| {
                        cell.iter()
                            .filter(|(_, r)| new_index[*r] != usize::MAX)
                            .map(|(o, r)| (o.clone(), new_index[*r]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let finals = keep.iter().map(|&q| self.finals[q].clone()).collect();
        Transducer::from_raw(self.alphabet.clone(), None, new_index[self.initial], trans, finals)
    }
}

/// The identity function on the language of `d`.
pub fn identity_on(d: &Dfa) -> Transducer {
    let trans = d
        .delta
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, &r)| vec![(d.alphabet[i].to_string(), r)])
                .collect()
        })
        .collect();
    let finals = d.accepting.iter().map(|&a| a.then(String::new)).collect();
    Transducer::from_raw(d.alphabet.clone(), None, d.initial, trans, finals).trim()
}

/// w ↦ t2(t1(w)): product states, with `t2` reading each output word of
/// `t1` letter by letter.
pub fn compose(t1: &Transducer, t2: &Transducer) -> Result<Transducer, TransducerError> {
    t1.same_alphabet(t2)?;
    let k = t1.alphabet.len();
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut trans: Vec<Vec<Vec<(String, usize)>>> = Vec::new();
    let mut finals: Vec<Option<String>> = Vec::new();
    let mut intern = |pair: (usize, usize), pairs: &mut Vec<(usize, usize)>| -> usize {
        *index.entry(pair).or_insert_with(|| {
            pairs.push(pair);
            pairs.len() - 1
        })
    };
    intern((t1.initial, t2.initial), &mut pairs);
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut row = vec![Vec::new(); k];
        for (letter, cell) in t1.trans[p].iter().enumerate() {
            for (o1, p2) in cell {
                for (q2, o2) in t2.run_from(q, o1)? {
                    let j = intern((*p2, q2), &mut pairs);
                    row[letter].push((o2, j));
                }
            }
        }
        trans.push(row);
        let mut fin: Option<String> = None;
        if let Some(w1) = &t1.finals[p] {
            for (q2, o2) in t2.run_from(q, w1)? {
                if let Some(w2) = &t2.finals[q2] {
                    let w = format!("{o2}{w2}");
                    match &fin {
                        Some(prev) if *prev != w => {
                            return Err(TransducerError::NotFunctional {
                                input: String::from("(final output of a composed state)"),
                                first: prev.clone(),
                                second: w,
                            })
                        }
                        _ => fin = Some(w),
                    }
                }
            }
        }
        finals.push(fin);
        i += 1;
    }
    Ok(Transducer::from_raw(t1.alphabet.clone(), None, 0, trans, finals).trim())
}

/// Accepts exactly the words on which `t` is defined.
pub fn domain_dfa(t: &Transducer) -> Dfa {
    determinize(
        &t.alphabet,
        &[t.initial],
        |q, i| t.trans[q][i].iter().map(|(_, r)| *r).collect(),
        |_| Vec::new(),
        |q| t.finals[q].is_some(),
    )
}

/// Accepts exactly the outputs of `t`: each output word becomes a path of
/// letter moves (empty words become ε-moves) in an acceptor, which is then
/// determinised.
pub fn range_dfa(t: &Transducer) -> Dfa {
    let n = t.num_states();
    let k = t.alphabet.len();
    // states 0..n are those of t; `accept` is the single accepting state
    let accept = n;
    let mut letter_moves: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k]; n + 1];
    let mut eps: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let add_path =
        |from: usize, word: &str, to: usize, letter_moves: &mut Vec<Vec<Vec<usize>>>, eps: &mut Vec<Vec<usize>>| {
            let letters: Vec<usize> = word
                .chars()
                .map(|c| letter_index(&t.alphabet, c).expect("outputs are checked at construction"))
                .collect();
            if letters.is_empty() {
                eps[from].push(to);
                return;
            }
            let mut cur = from;
            for (j, &l) in letters.iter().enumerate() {
                let next = if j + 1 == letters.len() {
                    to
                } else {
                    letter_moves.push(vec![Vec::new(); k]);
                    eps.push(Vec::new());
                    letter_moves.len() - 1
                };
                letter_moves[cur][l].push(next);
                cur = next;
            }
        };
    for q in 0..n {
        for cell in &t.trans[q] {
            for (o, r) in cell {
                add_path(q, o, *r, &mut letter_moves, &mut eps);
            }
        }
        if let Some(w) = &t.finals[q] {
            add_path(q, w, accept, &mut letter_moves, &mut eps);
        }
    }
    determinize(
        &t.alphabet,
        &[t.initial],
        |q, i| letter_moves[q][i].clone(),
        |q| eps[q].clone(),
        |q| q == accept,
    )
}

/// Identity on the words where `t` is undefined.
pub fn antidomain(t: &Transducer) -> Transducer {
    identity_on(&domain_dfa(t).complement())
}

/// Identity on the outputs of `t`.
pub fn range(t: &Transducer) -> Transducer {
    identity_on(&range_dfa(t))
}

/// `t` restricted to inputs accepted by `d`.
pub fn restrict(t: &Transducer, d: &Dfa) -> Result<Transducer, TransducerError> {
    if t.alphabet != d.alphabet {
        return Err(TransducerError::AlphabetMismatch);
    }
    let s = d.num_states();
    let idx = |p: usize, q: usize| p * s + q;
    let mut trans = Vec::with_capacity(t.num_states() * s);
    let mut finals = Vec::with_capacity(t.num_states() * s);
    for p in 0..t.num_states() {
        for q in 0..s {
            let row = (0..t.alphabet.len())
                .map(|i| {
                    t.trans[p][i]
                        .iter()
                        .map(|(o, r)| (o.clone(), idx(*r, d.delta[q][i])))
                        .collect()
                })
                .collect();
            trans.push(row);
            finals.push(if d.accepting[q] { t.finals[p].clone() } else { None });
        }
    }
    Ok(Transducer::from_raw(t.alphabet.clone(), None, idx(t.initial, d.initial), trans, finals).trim())
}

/// Union of two transducers with disjoint domains, through a fresh initial
/// state that starts both.
fn disjoint_union(t1: &Transducer, t2: &Transducer) -> Transducer {
    let (n1, k) = (t1.num_states(), t1.alphabet.len());
    let shift = |cell: &Vec<(String, usize)>, by: usize| -> Vec<(String, usize)> {
        cell.iter().map(|(o, r)| (o.clone(), r + by)).collect()
    };
    let mut trans = Vec::with_capacity(1 + n1 + t2.num_states());
    let start: Vec<Vec<(String, usize)>> = (0..k)
        .map(|i| {
            let mut cell = shift(&t1.trans[t1.initial][i], 1);
            cell.extend(shift(&t2.trans[t2.initial][i], 1 + n1));
            cell
        })
        .collect();
    trans.push(start);
    trans.extend(t1.trans.iter().map(|row| row.iter().map(|c| shift(c, 1)).collect()));
    trans.extend(
        t2.trans
            .iter()
            .map(|row| row.iter().map(|c| shift(c, 1 + n1)).collect()),
    );
    let mut finals = vec![t1.finals[t1.initial].clone().or_else(|| t2.finals[t2.initial].clone())];
    finals.extend(t1.finals.iter().cloned());
    finals.extend(t2.finals.iter().cloned());
    Transducer::from_raw(t1.alphabet.clone(), None, 0, trans, finals).trim()
}

/// `t1` where defined, else `t2`.
pub fn pref_union(t1: &Transducer, t2: &Transducer) -> Result<Transducer, TransducerError> {
    t1.same_alphabet(t2)?;
    let rest = restrict(t2, &domain_dfa(t1).complement())?;
    Ok(disjoint_union(t1, &rest))
}

fn check_cap(len: usize, cap: usize) -> Result<(), TransducerError> {
    if len > cap {
        return Err(TransducerError::LengthCap { len, cap });
    }
    Ok(())
}

/// First word of length at most `max_len` (shortlex) on which the two
/// functions differ, or `None` if they agree on all such words.
pub fn equiv_bounded(t1: &Transducer, t2: &Transducer, max_len: usize) -> Result<Option<String>, TransducerError> {
    equiv_bounded_capped(t1, t2, max_len, DEFAULT_LENGTH_CAP)
}

pub fn equiv_bounded_capped(
    t1: &Transducer,
    t2: &Transducer,
    max_len: usize,
    cap: usize,
) -> Result<Option<String>, TransducerError> {
    check_cap(max_len, cap)?;
    t1.same_alphabet(t2)?;
    for w in words_up_to(&t1.alphabet, max_len) {
        if t1.eval(&w)? != t2.eval(&w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// The transducer operations with equality replaced by agreement on words
/// up to a fixed length.
#[derive(Clone, Copy, Debug)]
pub struct Bounded {
    pub max_len: usize,
}

impl Signature for Bounded {
    type Elem = Transducer;

    fn compose(&self, a: &Transducer, b: &Transducer) -> Transducer {
        compose(a, b).expect("composition of functional transducers over one alphabet")
    }

    fn antidomain(&self, a: &Transducer) -> Transducer {
        antidomain(a)
    }

    fn range(&self, a: &Transducer) -> Transducer {
        range(a)
    }

    fn pref(&self, a: &Transducer, b: &Transducer) -> Transducer {
        pref_union(a, b).expect("transducers share an alphabet")
    }

    fn same(&self, a: &Transducer, b: &Transducer) -> bool {
        matches!(equiv_bounded_capped(a, b, self.max_len, usize::MAX), Ok(None))
    }
}

/// Every axiom instantiated over all tuples from `ts`, both sides
/// compared on words up to `max_len`. Bounding can make the quasiequations
/// fail spuriously, since equal-up-to-L premises need not imply equal
/// conclusions up to L.
pub fn axioms_bounded(ts: &[Transducer], max_len: usize) -> Result<AxiomReport, TransducerError> {
    axioms_bounded_capped(ts, max_len, DEFAULT_LENGTH_CAP)
}

pub fn axioms_bounded_capped(ts: &[Transducer], max_len: usize, cap: usize) -> Result<AxiomReport, TransducerError> {
    check_cap(max_len, cap)?;
    if let Some(t) = ts.first() {
        for u in ts {
            t.same_alphabet(u)?;
        }
    }
    Ok(axioms::check_all(&Bounded { max_len }, ts))
}
