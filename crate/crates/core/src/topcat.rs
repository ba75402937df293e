//! Finite topological categories and multivalued functors between them.
//!
//! A finite topology is determined by the least open neighbourhood of each
//! point, so [`FinTopology`] stores exactly those; a set is open iff it
//! contains the neighbourhood of each of its points. Continuity, openness and
//! local-homeomorphism tests reduce to statements about neighbourhoods,
//! which keeps the pullback of a category with a few dozen arrows tractable.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::subset::Subset;
use crate::{Report, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("family is not a topology on {0} points")]
    NotATopology(usize),
    #[error("set over universe {got} used on a carrier of size {expected}")]
    UniverseMismatch { expected: usize, got: usize },
}

/// A topology on `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinTopology {
    nbhd: Vec<Subset>,
}

impl FinTopology {
    pub fn discrete(n: usize) -> FinTopology {
        FinTopology {
            nbhd: (0..n).map(|x| Subset::singleton(n, x)).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> FinTopology {
        FinTopology {
            nbhd: vec![Subset::full(n); n],
        }
    }

    /// Topology generated by a subbasis: each minimal neighbourhood is the
    /// intersection of the subbasis members containing the point.
    pub fn generate(n: usize, subbasis: &[Subset]) -> FinTopology {
        let nbhd = (0..n)
            .map(|x| {
                subbasis
                    .iter()
                    .filter(|s| s.contains(x))
                    .fold(Subset::full(n), |acc, s| acc.intersection(s))
            })
            .collect();
        FinTopology { nbhd }
    }

    /// Checked construction from a full family of open sets.
    pub fn from_opens(n: usize, family: &[Subset]) -> Result<FinTopology, TopologyError> {
        if let Some(s) = family.iter().find(|s| s.universe() != n) {
            return Err(TopologyError::UniverseMismatch {
                expected: n,
                got: s.universe(),
            });
        }
        if !is_topology(n, family) {
            return Err(TopologyError::NotATopology(n));
        }
        Ok(FinTopology::generate(n, family))
    }

    pub fn len(&self) -> usize {
        self.nbhd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbhd.is_empty()
    }

    /// Least open set containing `x`.
    pub fn nbhd(&self, x: usize) -> &Subset {
        &self.nbhd[x]
    }

    pub fn is_open(&self, s: &Subset) -> bool {
        s.iter().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn is_clopen(&self, s: &Subset) -> bool {
        self.is_open(s) && self.is_open(&s.complement())
    }

    /// Largest open subset.
    pub fn interior(&self, s: &Subset) -> Subset {
        Subset::from_iter(self.len(), s.iter().filter(|&x| self.nbhd[x].is_subset(s)))
    }

    pub fn is_discrete(&self) -> bool {
        self.nbhd.iter().all(|n| n.len() == 1)
    }

    /// Every open set, sorted. Exponential in the number of points for
    /// discrete spaces; meant for small carriers.
    pub fn opens(&self) -> Vec<Subset> {
        let n = self.len();
        let mut found: BTreeSet<Subset> = BTreeSet::new();
        found.insert(Subset::empty(n));
        for nb in &self.nbhd {
            let extended: Vec<Subset> = found.iter().map(|u| u.union(nb)).collect();
            found.extend(extended);
        }
        found.into_iter().collect()
    }

    /// Clopen sets, sorted by size and then lexicographically.
    pub fn clopens(&self) -> Vec<Subset> {
        let comps = self.components();
        assert!(comps.len() < 64, "too many components to list clopens");
        let mut out: Vec<Subset> = (0u64..(1u64 << comps.len()))
            .map(|mask| {
                let mut s = Subset::empty(self.len());
                for (i, c) in comps.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s.union_with(c);
                    }
                }
                s
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Connected components; in a finite space these are the atoms of the
    /// Boolean algebra of clopen sets.
    pub fn components(&self) -> Vec<Subset> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for x in 0..n {
            for y in self.nbhd[x].iter() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut comps: Vec<Subset> = Vec::new();
        let mut index = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(Subset::empty(n));
            }
            comps[index[r]].insert(x);
        }
        comps
    }

    /// Image of a set under a map into a space with `target_len` points.
    pub fn image(map: &[usize], s: &Subset, target_len: usize) -> Subset {
        Subset::from_iter(target_len, s.iter().map(|x| map[x]))
    }
}

/// Closure of a subbasis under finite unions and intersections.
pub fn generate_topology(n: usize, subbasis: &[Subset]) -> FinTopology {
    FinTopology::generate(n, subbasis)
}

/// Contains ∅ and the carrier and is closed under binary ∪ and ∩.
pub fn is_topology(n: usize, family: &[Subset]) -> bool {
    let set: BTreeSet<&Subset> = family.iter().collect();
    if family.iter().any(|s| s.universe() != n) || !set.contains(&Subset::empty(n)) || !set.contains(&Subset::full(n)) {
        return false;
    }
    family.iter().all(|a| {
        family
            .iter()
            .all(|b| set.contains(&a.union(b)) && set.contains(&a.intersection(b)))
    })
}

/// A point `x` of the domain with `map[N(x)] ⊄ N(map(x))`; the open set
/// `N(map(x))` then has a preimage that is not open.
pub fn continuity_failure(from: &FinTopology, to: &FinTopology, map: &[usize]) -> Option<usize> {
    (0..from.len()).find(|&x| from.nbhd(x).iter().any(|y| !to.nbhd(map[x]).contains(map[y])))
}

pub fn is_continuous(from: &FinTopology, to: &FinTopology, map: &[usize]) -> bool {
    continuity_failure(from, to, map).is_none()
}

/// A point whose neighbourhood has a non-open image.
pub fn open_map_failure(from: &FinTopology, to: &FinTopology, map: &[usize]) -> Option<usize> {
    (0..from.len()).find(|&x| !to.is_open(&FinTopology::image(map, from.nbhd(x), to.len())))
}

/// A point at which `map` is not a local homeomorphism: on the least
/// neighbourhood `N(x)` it must be injective and send every open subset to
/// an open set. Continuity is checked separately.
pub fn local_homeo_failure(from: &FinTopology, to: &FinTopology, map: &[usize]) -> Option<usize> {
    (0..from.len()).find(|&x| {
        let u = from.nbhd(x);
        let image = FinTopology::image(map, u, to.len());
        image.len() != u.len()
            || u.iter()
                .any(|y| !to.is_open(&FinTopology::image(map, from.nbhd(y), to.len())))
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("{what} has {got} entries, expected {expected}")]
    Size {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} refers to missing index {index}")]
    OutOfRange { what: &'static str, index: usize },
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("identity of {0} does not start and end there")]
    IdentityEnds(String),
    #[error("composite {0}·{1} is defined exactly when the arrows meet")]
    CompositionDomain(String, String),
    #[error("composite {0}·{1} has the wrong ends")]
    CompositionEnds(String, String),
    #[error("unit law fails at {0}")]
    UnitLaw(String),
    #[error("associativity fails at ({0}, {1}, {2})")]
    Associativity(String, String, String),
}

/// Raw ingredients of a [`TopCategory`]. `comp` is row-major over arrow
/// pairs: entry `f*m + g` is `f·g` (first `f`, then `g`) when defined.
#[derive(Clone, Debug)]
pub struct CategoryParts {
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub id_of: Vec<usize>,
    pub comp: Vec<Option<usize>>,
    pub obj_top: FinTopology,
    pub arr_top: FinTopology,
}

/// A finite category with topologies on objects and arrows. Construction
/// checks the category axioms; topological conditions are checked by
/// [`check_topological_category`] and [`validate_object_of_c`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TopCategory {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    id_of: Vec<usize>,
    comp: Vec<Option<usize>>,
    obj_top: FinTopology,
    arr_top: FinTopology,
}

fn check_names(names: &[String]) -> Result<(), CategoryError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(CategoryError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

fn check_size(what: &'static str, got: usize, expected: usize) -> Result<(), CategoryError> {
    if got != expected {
        return Err(CategoryError::Size { what, expected, got });
    }
    Ok(())
}

fn check_range(what: &'static str, v: &[usize], bound: usize) -> Result<(), CategoryError> {
    match v.iter().find(|&&i| i >= bound) {
        Some(&index) => Err(CategoryError::OutOfRange { what, index }),
        None => Ok(()),
    }
}

impl TopCategory {
    pub fn new(parts: CategoryParts) -> Result<TopCategory, CategoryError> {
        let CategoryParts {
            objects,
            arrows,
            src,
            tgt,
            id_of,
            comp,
            obj_top,
            arr_top,
        } = parts;
        let (o, m) = (objects.len(), arrows.len());
        check_names(&objects)?;
        check_names(&arrows)?;
        check_size("src", src.len(), m)?;
        check_size("tgt", tgt.len(), m)?;
        check_size("id", id_of.len(), o)?;
        check_size("comp", comp.len(), m * m)?;
        check_size("object topology", obj_top.len(), o)?;
        check_size("arrow topology", arr_top.len(), m)?;
        check_range("src", &src, o)?;
        check_range("tgt", &tgt, o)?;
        check_range("id", &id_of, m)?;
        let defined: Vec<usize> = comp.iter().flatten().copied().collect();
        check_range("comp", &defined, m)?;
        let cat = TopCategory {
            objects,
            arrows,
            src,
            tgt,
            id_of,
            comp,
            obj_top,
            arr_top,
        };
        cat.check_axioms()?;
        Ok(cat)
    }

    fn check_axioms(&self) -> Result<(), CategoryError> {
        let m = self.num_arrows();
        for x in 0..self.num_objects() {
            let i = self.id_of[x];
            if self.src[i] != x || self.tgt[i] != x {
                return Err(CategoryError::IdentityEnds(self.objects[x].clone()));
            }
        }
        for f in 0..m {
            for g in 0..m {
                let meets = self.tgt[f] == self.src[g];
                match self.comp(f, g) {
                    Some(h) if meets => {
                        if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                            return Err(CategoryError::CompositionEnds(
                                self.arrows[f].clone(),
                                self.arrows[g].clone(),
                            ));
                        }
                    }
                    None if !meets => {}
                    _ => {
                        return Err(CategoryError::CompositionDomain(
                            self.arrows[f].clone(),
                            self.arrows[g].clone(),
                        ))
                    }
                }
            }
        }
        for f in 0..m {
            if self.comp(self.id_of[self.src[f]], f) != Some(f) || self.comp(f, self.id_of[self.tgt[f]]) != Some(f) {
                return Err(CategoryError::UnitLaw(self.arrows[f].clone()));
            }
        }
        for (f, g) in self.composable_pairs() {
            let fg = self.comp(f, g).unwrap();
            for h in self.star(self.tgt[g]).iter() {
                if self.comp(fg, h) != self.comp(f, self.comp(g, h).unwrap()) {
                    return Err(CategoryError::Associativity(
                        self.arrows[f].clone(),
                        self.arrows[g].clone(),
                        self.arrows[h].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The category with no objects and no arrows.
    pub fn empty() -> TopCategory {
        TopCategory {
            objects: Vec::new(),
            arrows: Vec::new(),
            src: Vec::new(),
            tgt: Vec::new(),
            id_of: Vec::new(),
            comp: Vec::new(),
            obj_top: FinTopology::discrete(0),
            arr_top: FinTopology::discrete(0),
        }
    }

    /// Identity arrows only, named after their objects, with the given
    /// object topology carried over to the arrows.
    pub fn discrete_on(objects: Vec<String>, obj_top: FinTopology) -> Result<TopCategory, CategoryError> {
        let n = objects.len();
        let mut comp = vec![None; n * n];
        for x in 0..n {
            comp[x * n + x] = Some(x);
        }
        TopCategory::new(CategoryParts {
            arrows: objects.iter().map(|o| format!("1_{o}")).collect(),
            objects,
            src: (0..n).collect(),
            tgt: (0..n).collect(),
            id_of: (0..n).collect(),
            comp,
            arr_top: obj_top.clone(),
            obj_top,
        })
    }

    /// Same category with other topologies.
    pub fn with_topologies(&self, obj_top: FinTopology, arr_top: FinTopology) -> Result<TopCategory, CategoryError> {
        let mut parts = self.parts();
        parts.obj_top = obj_top;
        parts.arr_top = arr_top;
        TopCategory::new(parts)
    }

    pub fn parts(&self) -> CategoryParts {
        CategoryParts {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            id_of: self.id_of.clone(),
            comp: self.comp.clone(),
            obj_top: self.obj_top.clone(),
            arr_top: self.arr_top.clone(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, f: usize) -> &str {
        &self.arrows[f]
    }

    pub fn object_index(&self, name: &str) -> Result<usize, CategoryError> {
        self.objects
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CategoryError::UnknownName(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, CategoryError> {
        self.arrows
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CategoryError::UnknownName(name.to_string()))
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn src_map(&self) -> &[usize] {
        &self.src
    }

    pub fn tgt_map(&self) -> &[usize] {
        &self.tgt
    }

    pub fn id_of(&self, x: usize) -> usize {
        self.id_of[x]
    }

    pub fn id_map(&self) -> &[usize] {
        &self.id_of
    }

    /// `f·g`, first `f` then `g`.
    pub fn comp(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.num_arrows() + g]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.id_of[self.src[f]] == f
    }

    pub fn identities(&self) -> Subset {
        Subset::from_iter(self.num_arrows(), self.id_of.iter().copied())
    }

    /// Arrows with source `x`.
    pub fn star(&self, x: usize) -> Subset {
        Subset::from_iter(self.num_arrows(), (0..self.num_arrows()).filter(|&f| self.src[f] == x))
    }

    /// Arrows with target `x`.
    pub fn costar(&self, x: usize) -> Subset {
        Subset::from_iter(self.num_arrows(), (0..self.num_arrows()).filter(|&f| self.tgt[f] == x))
    }

    pub fn obj_topology(&self) -> &FinTopology {
        &self.obj_top
    }

    pub fn arr_topology(&self) -> &FinTopology {
        &self.arr_top
    }

    /// Pairs `(f, g)` with `tgt(f) = src(g)`, lexicographically.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.num_arrows();
        (0..m)
            .flat_map(|f| (0..m).map(move |g| (f, g)))
            .filter(|&(f, g)| self.tgt[f] == self.src[g])
            .collect()
    }

    /// The pullback M ×_O M with the topology generated by the preimages of
    /// opens under the two projections.
    pub fn pullback(&self) -> (Vec<(usize, usize)>, FinTopology) {
        let pairs = self.composable_pairs();
        let nbhd = pairs
            .iter()
            .map(|&(f, g)| {
                Subset::from_iter(
                    pairs.len(),
                    pairs.iter().enumerate().filter_map(|(i, &(f2, g2))| {
                        (self.arr_top.nbhd(f).contains(f2) && self.arr_top.nbhd(g).contains(g2)).then_some(i)
                    }),
                )
            })
            .collect();
        (pairs, FinTopology { nbhd })
    }

    pub fn arrows_named(&self, s: &Subset) -> String {
        names_of(&self.arrows, s)
    }

    pub fn objects_named(&self, s: &Subset) -> String {
        names_of(&self.objects, s)
    }
}

fn names_of(names: &[String], s: &Subset) -> String {
    let parts: Vec<&str> = s.iter().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn continuity_verdict(from: &FinTopology, to: &FinTopology, map: &[usize], names: &[String]) -> Verdict {
    match continuity_failure(from, to, map) {
        None => Verdict::pass(),
        Some(x) => Verdict::fail(format!(
            "preimage of open {} is not open",
            names_of(names, to.nbhd(map[x]))
        )),
    }
}

/// Continuity of src, tgt, the identity map and composition, the last
/// against the pullback topology.
pub fn check_topological_category(c: &TopCategory) -> Report {
    let mut r = Report::default();
    r.push(
        "src continuous",
        continuity_verdict(&c.arr_top, &c.obj_top, &c.src, &c.objects),
    );
    r.push(
        "tgt continuous",
        continuity_verdict(&c.arr_top, &c.obj_top, &c.tgt, &c.objects),
    );
    r.push(
        "identity map continuous",
        continuity_verdict(&c.obj_top, &c.arr_top, &c.id_of, &c.arrows),
    );
    let (pairs, top) = c.pullback();
    let comp: Vec<usize> = pairs.iter().map(|&(f, g)| c.comp(f, g).unwrap()).collect();
    r.push(
        "composition continuous",
        continuity_verdict(&top, &c.arr_top, &comp, &c.arrows),
    );
    r
}

pub fn is_local_homeo(c: &TopCategory) -> Verdict {
    match local_homeo_failure(&c.arr_top, &c.obj_top, &c.src) {
        None => Verdict::pass(),
        Some(f) => Verdict::fail(format!("src is not a homeomorphism near {}", c.arrows[f])),
    }
}

pub fn is_open_map(c: &TopCategory) -> Verdict {
    match open_map_failure(&c.arr_top, &c.obj_top, &c.tgt) {
        None => Verdict::pass(),
        Some(f) => Verdict::fail(format!(
            "tgt image of open {} is not open",
            c.arrows_named(c.arr_top.nbhd(f))
        )),
    }
}

/// Finite spaces are compact; they are totally separated iff every
/// connected component is a single point, i.e. iff they are discrete.
pub fn is_stone(top: &FinTopology) -> bool {
    let separated = top.components().iter().all(|c| c.len() == 1);
    debug_assert_eq!(separated, top.is_discrete());
    separated
}

/// First `(a, b, c)` with `a·b = a·c` and `b ≠ c`.
pub fn epi_failure(c: &TopCategory) -> Option<(usize, usize, usize)> {
    for a in 0..c.num_arrows() {
        let star = c.star(c.tgt(a));
        for b in star.iter() {
            for d in star.iter() {
                if b != d && c.comp(a, b) == c.comp(a, d) {
                    return Some((a, b, d));
                }
            }
        }
    }
    None
}

pub fn all_arrows_epi(c: &TopCategory) -> bool {
    epi_failure(c).is_none()
}

/// Everything required of a Stone étale category whose arrows are epi.
pub fn validate_object_of_c(c: &TopCategory) -> Report {
    let mut r = check_topological_category(c);
    r.push("src local homeomorphism", is_local_homeo(c));
    r.push("tgt open map", is_open_map(c));
    r.push(
        "object space Stone",
        if is_stone(&c.obj_top) {
            Verdict::pass()
        } else {
            Verdict::fail("object space is not totally separated")
        },
    );
    r.push(
        "arrows epimorphic",
        match epi_failure(c) {
            None => Verdict::pass(),
            Some((a, b, d)) => Verdict::fail(format!(
                "{a}·{b} = {a}·{d}",
                a = c.arrows[a],
                b = c.arrows[b],
                d = c.arrows[d]
            )),
        },
    );
    r
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map has {got} entries, source has {expected} objects")]
    ObjectMapSize { expected: usize, got: usize },
    #[error("arrow relation has {got} rows, source has {expected} arrows")]
    RelationSize { expected: usize, got: usize },
    #[error("index {0} is outside the target category")]
    OutOfRange(usize),
    #[error("functors do not compose: target and source categories differ")]
    Mismatch,
}

/// An object map and an arrow relation, possibly empty-valued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFunctor {
    pub source: TopCategory,
    pub target: TopCategory,
    obj_map: Vec<usize>,
    arr_rel: Vec<Subset>,
}

impl MultiFunctor {
    /// Shape checks only; see [`check_multifunctor`] for the functor laws.
    pub fn new(
        source: TopCategory,
        target: TopCategory,
        obj_map: Vec<usize>,
        arr_rel: Vec<Subset>,
    ) -> Result<MultiFunctor, FunctorError> {
        if obj_map.len() != source.num_objects() {
            return Err(FunctorError::ObjectMapSize {
                expected: source.num_objects(),
                got: obj_map.len(),
            });
        }
        if arr_rel.len() != source.num_arrows() {
            return Err(FunctorError::RelationSize {
                expected: source.num_arrows(),
                got: arr_rel.len(),
            });
        }
        if let Some(&x) = obj_map.iter().find(|&&x| x >= target.num_objects()) {
            return Err(FunctorError::OutOfRange(x));
        }
        if arr_rel.iter().any(|s| s.universe() != target.num_arrows()) {
            return Err(FunctorError::OutOfRange(target.num_arrows()));
        }
        Ok(MultiFunctor {
            source,
            target,
            obj_map,
            arr_rel,
        })
    }

    /// Build from `(source arrow, target arrow)` pairs.
    pub fn from_pairs(
        source: TopCategory,
        target: TopCategory,
        obj_map: Vec<usize>,
        pairs: &[(usize, usize)],
    ) -> Result<MultiFunctor, FunctorError> {
        let mut rel = vec![Subset::empty(target.num_arrows()); source.num_arrows()];
        for &(f, g) in pairs {
            if f >= source.num_arrows() || g >= target.num_arrows() {
                return Err(FunctorError::OutOfRange(f.max(g)));
            }
            rel[f].insert(g);
        }
        MultiFunctor::new(source, target, obj_map, rel)
    }

    pub fn identity(c: &TopCategory) -> MultiFunctor {
        let m = c.num_arrows();
        MultiFunctor {
            source: c.clone(),
            target: c.clone(),
            obj_map: (0..c.num_objects()).collect(),
            arr_rel: (0..m).map(|f| Subset::singleton(m, f)).collect(),
        }
    }

    pub fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    /// F(f).
    pub fn arr(&self, f: usize) -> &Subset {
        &self.arr_rel[f]
    }

    pub fn relation(&self) -> &[Subset] {
        &self.arr_rel
    }

    /// The relation as sorted pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.arr_rel
            .iter()
            .enumerate()
            .flat_map(|(f, s)| s.iter().map(move |g| (f, g)))
            .collect()
    }

    /// Same functor with one pair removed from the relation.
    pub fn without_pair(&self, f: usize, g: usize) -> MultiFunctor {
        let mut out = self.clone();
        out.arr_rel[f].remove(g);
        out
    }

    /// Same functor with one pair added to the relation.
    pub fn with_pair(&self, f: usize, g: usize) -> MultiFunctor {
        let mut out = self.clone();
        out.arr_rel[f].insert(g);
        out
    }

    /// Weak preimage {c | F(c) ∩ U ≠ ∅}.
    pub fn preimage(&self, u: &Subset) -> Subset {
        Subset::from_iter(
            self.source.num_arrows(),
            (0..self.source.num_arrows()).filter(|&c| !self.arr_rel[c].is_disjoint(u)),
        )
    }

    /// Union of F(f) over `f` in `s`.
    pub fn image(&self, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.target.num_arrows());
        for f in s.iter() {
            out.union_with(&self.arr_rel[f]);
        }
        out
    }
}

/// Conditions (1) arrow ends, (2) identities, (3) composites.
pub fn check_multifunctor(fun: &MultiFunctor) -> Report {
    let (s, t) = (&fun.source, &fun.target);
    let mut r = Report::default();
    let ends = (0..s.num_arrows())
        .flat_map(|f| fun.arr(f).iter().map(move |g| (f, g)))
        .find(|&(f, g)| t.src(g) != fun.obj(s.src(f)) || t.tgt(g) != fun.obj(s.tgt(f)));
    r.push(
        "(1) arrow ends",
        Verdict::from_witness(ends.map(|(f, g)| format!("{} ∈ F({})", t.arrow_name(g), s.arrow_name(f)))),
    );
    let ids = (0..s.num_objects()).find(|&x| !fun.arr(s.id_of(x)).contains(t.id_of(fun.obj(x))));
    r.push(
        "(2) identities",
        Verdict::from_witness(ids.map(|x| format!("1_F({}) ∉ F(1_{})", s.object_name(x), s.object_name(x)))),
    );
    let mut comp = None;
    'outer: for (f1, f2) in s.composable_pairs() {
        let f = s.comp(f1, f2).unwrap();
        for g1 in fun.arr(f1).iter() {
            for g2 in fun.arr(f2).iter() {
                if t.comp(g1, g2).is_none_or(|g| !fun.arr(f).contains(g)) {
                    comp = Some(format!(
                        "{}·{} ∉ F({}·{})",
                        t.arrow_name(g1),
                        t.arrow_name(g2),
                        s.arrow_name(f1),
                        s.arrow_name(f2)
                    ));
                    break 'outer;
                }
            }
        }
    }
    r.push("(3) composition", Verdict::from_witness(comp));
    r
}

/// Continuity of the object map and of the arrow relation (weak preimages
/// of opens are open).
pub fn continuity_report(fun: &MultiFunctor) -> Report {
    let (s, t) = (&fun.source, &fun.target);
    let mut r = Report::default();
    r.push(
        "object map continuous",
        continuity_verdict(s.obj_topology(), t.obj_topology(), &fun.obj_map, t.object_names()),
    );
    let bad = (0..t.num_arrows()).find(|&d| !s.arr_topology().is_open(&fun.preimage(t.arr_topology().nbhd(d))));
    r.push(
        "arrow relation continuous",
        Verdict::from_witness(bad.map(|d| {
            format!(
                "preimage of open {} is not open",
                t.arrows_named(t.arr_topology().nbhd(d))
            )
        })),
    );
    r
}

pub fn is_continuous_multifunctor(fun: &MultiFunctor) -> bool {
    continuity_report(fun).passed()
}

/// The star conditions of a multivalued functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarChecks {
    pub injective: Verdict,
    pub surjective: Verdict,
    pub pseudo: Verdict,
    pub co_pseudo: Verdict,
    /// injective ∧ surjective ∧ co-pseudo.
    pub coherent: bool,
}

impl StarChecks {
    pub fn report(&self) -> Report {
        let mut r = Report::default();
        r.push("star injective", self.injective.clone());
        r.push("star surjective", self.surjective.clone());
        r.push("pseudo star surjective", self.pseudo.clone());
        r.push("co-pseudo star surjective", self.co_pseudo.clone());
        r
    }
}

/// For every object `x` and arrow `u` of the target with the given end at
/// F(x), the neighbourhood of `u` meets the image of the (co)star of `x`.
/// Minimal neighbourhoods suffice since every open containing `u` contains
/// them.
fn pseudo_failure(fun: &MultiFunctor, co: bool) -> Option<(usize, usize)> {
    let (s, t) = (&fun.source, &fun.target);
    for x in 0..s.num_objects() {
        let (star, end) = if co {
            (s.costar(x), t.costar(fun.obj(x)))
        } else {
            (s.star(x), t.star(fun.obj(x)))
        };
        let image = fun.image(&star);
        for u in end.iter() {
            if image.is_disjoint(t.arr_topology().nbhd(u)) {
                return Some((x, u));
            }
        }
    }
    None
}

pub fn star_checks(fun: &MultiFunctor) -> StarChecks {
    let (s, t) = (&fun.source, &fun.target);
    let mut inj = None;
    'inj: for x in 0..s.num_objects() {
        let star: Vec<usize> = s.star(x).iter().collect();
        for (i, &f1) in star.iter().enumerate() {
            for &f2 in &star[i + 1..] {
                if !fun.arr(f1).is_disjoint(fun.arr(f2)) {
                    inj = Some(format!("F({}) and F({}) overlap", s.arrow_name(f1), s.arrow_name(f2)));
                    break 'inj;
                }
            }
        }
    }
    let mut surj = None;
    for x in 0..s.num_objects() {
        let image = fun.image(&s.star(x));
        if let Some(g) = t.star(fun.obj(x)).iter().find(|&g| !image.contains(g)) {
            surj = Some(format!(
                "{} from F({}) has no preimage at {}",
                t.arrow_name(g),
                s.object_name(x),
                s.object_name(x)
            ));
            break;
        }
    }
    let describe = |(x, u): (usize, usize)| {
        format!(
            "open {} around {} misses the image at {}",
            t.arrows_named(t.arr_topology().nbhd(u)),
            t.arrow_name(u),
            s.object_name(x)
        )
    };
    let pseudo = pseudo_failure(fun, false).map(describe);
    let co_pseudo = pseudo_failure(fun, true).map(describe);
    let coherent = inj.is_none() && surj.is_none() && co_pseudo.is_none();
    StarChecks {
        injective: Verdict::from_witness(inj),
        surjective: Verdict::from_witness(surj),
        pseudo: Verdict::from_witness(pseudo),
        co_pseudo: Verdict::from_witness(co_pseudo),
        coherent,
    }
}

/// `f` then `g`: objects x ↦ G(F(x)), arrows related through some middle
/// arrow.
pub fn compose_multifunctors(f: &MultiFunctor, g: &MultiFunctor) -> Result<MultiFunctor, FunctorError> {
    if f.target != g.source {
        return Err(FunctorError::Mismatch);
    }
    let obj_map = f.obj_map.iter().map(|&y| g.obj(y)).collect();
    let arr_rel = f.arr_rel.iter().map(|s| g.image(s)).collect();
    Ok(MultiFunctor {
        source: f.source.clone(),
        target: g.target.clone(),
        obj_map,
        arr_rel,
    })
}

/// Every arrow has exactly one image.
pub fn is_plain_functor(fun: &MultiFunctor) -> bool {
    fun.arr_rel.iter().all(|s| s.len() == 1)
}

/// The arrow function of a plain functor.
pub fn arrow_function(fun: &MultiFunctor) -> Option<Vec<usize>> {
    fun.arr_rel
        .iter()
        .map(|s| if s.len() == 1 { s.first() } else { None })
        .collect()
}
