//! JSON file formats. Every reader reports syntax and type errors with the
//! line and column of the offending token; every writer emits keys in a
//! fixed order so output is canonical.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use pfdual::algebra::{FinAlgebra, Homomorphism};
use pfdual::pfun::{self, Base, PFunc};
use pfdual::topcat::{CategoryParts, FinTopology, MultiFunctor, TopCategory};
use pfdual::transducer::{Dfa, Transducer, Transition};
use pfdual::Subset;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {msg}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

fn invalid(path: &Path, msg: impl ToString) -> LoadError {
    LoadError::Invalid {
        path: path.display().to_string(),
        msg: msg.to_string(),
    }
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        msg: strip_position(&e.to_string()),
    })
}

// serde_json appends " at line L column C"; the position is reported separately
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// What a file holds, decided by its top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Concrete,
    Category,
    Hom,
    Functor,
    Transducer,
}

pub fn kind_of(path: &Path, text: &str) -> Result<Kind, LoadError> {
    let value: serde_json::Value = parse(path, text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| invalid(path, "top level must be an object"))?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("elements") {
        Kind::Algebra
    } else if has("base") {
        Kind::Concrete
    } else if has("arrows") {
        Kind::Category
    } else if has("map") {
        Kind::Hom
    } else if has("relation") {
        Kind::Functor
    } else if has("alphabet") {
        Kind::Transducer
    } else {
        return Err(invalid(
            path,
            "unrecognised file: no elements, base, arrows, map, relation or alphabet key",
        ));
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub elements: Vec<String>,
    pub compose: Vec<Vec<String>>,
    pub antidomain: Vec<String>,
    pub range: Vec<String>,
    pub pref: Vec<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_algebra(alg: &FinAlgebra) -> AlgebraFile {
        let name = |i: usize| alg.name(i).to_string();
        let square = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<String>> {
            alg.elements()
                .map(|a| alg.elements().map(|b| name(f(a, b))).collect())
                .collect()
        };
        AlgebraFile {
            elements: alg.names().to_vec(),
            compose: square(&|a, b| alg.compose(a, b)),
            antidomain: alg.elements().map(|a| name(alg.antidomain(a))).collect(),
            range: alg.elements().map(|a| name(alg.range(a))).collect(),
            pref: square(&|a, b| alg.pref(a, b)),
        }
    }

    pub fn to_algebra(&self) -> Result<FinAlgebra, String> {
        let n = self.elements.len();
        let mut index = HashMap::with_capacity(n);
        for (i, e) in self.elements.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(format!("duplicate element {e:?}"));
            }
        }
        let look = |s: &String, table: &str| -> Result<usize, String> {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| format!("{table}: unknown element {s:?}"))
        };
        let flat = |rows: &[Vec<String>], table: &str| -> Result<Vec<usize>, String> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(format!("{table} must be a {n}×{n} table"));
            }
            rows.iter().flatten().map(|s| look(s, table)).collect()
        };
        let unary = |row: &[String], table: &str| -> Result<Vec<usize>, String> {
            if row.len() != n {
                return Err(format!("{table} must have {n} entries"));
            }
            row.iter().map(|s| look(s, table)).collect()
        };
        FinAlgebra::from_tables(
            self.elements.clone(),
            flat(&self.compose, "compose")?,
            unary(&self.antidomain, "antidomain")?,
            unary(&self.range, "range")?,
            flat(&self.pref, "pref")?,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcreteFile {
    pub base: Vec<String>,
    pub functions: IndexMap<String, IndexMap<String, String>>,
}

impl ConcreteFile {
    pub fn to_functions(&self) -> Result<(Vec<String>, Vec<PFunc>), String> {
        let base = Base::new(self.base.iter().cloned()).map_err(|e| e.to_string())?;
        let mut names = Vec::with_capacity(self.functions.len());
        let mut fs = Vec::with_capacity(self.functions.len());
        for (name, graph) in &self.functions {
            let pairs: Vec<(&str, &str)> = graph.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
            fs.push(PFunc::from_pairs(&base, &pairs).map_err(|e| format!("{name}: {e}"))?);
            names.push(name.clone());
        }
        Ok((names, fs))
    }

    pub fn to_algebra(&self, max_base: usize) -> Result<FinAlgebra, String> {
        if self.base.len() > max_base {
            return Err(format!(
                "base has {} points, limit is {max_base} (raise with --max-base)",
                self.base.len()
            ));
        }
        let (names, fs) = self.to_functions()?;
        pfun::as_abstract(&fs, Some(&names))
            .map(|(alg, _)| alg)
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// Opens are read as a subbasis and written as the minimal neighbourhoods,
/// which form a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub opens_obj: Vec<Vec<String>>,
    pub arrows: Vec<ArrowEntry>,
    pub opens_arr: Vec<Vec<String>>,
    pub id: IndexMap<String, String>,
    pub comp: IndexMap<String, String>,
}

fn basis(top: &FinTopology, names: &[String]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    for x in 0..top.len() {
        let set: Vec<String> = top.nbhd(x).iter().map(|i| names[i].clone()).collect();
        if !out.contains(&set) {
            out.push(set);
        }
    }
    out
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>, String> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, s) in names.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(format!("duplicate {what} {s:?}"));
        }
    }
    Ok(index)
}

fn topology(sets: &[Vec<String>], index: &HashMap<String, usize>, what: &str) -> Result<FinTopology, String> {
    let n = index.len();
    let subbasis = sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|x| index.get(x).copied().ok_or_else(|| format!("{what}: unknown {x:?}")))
                .collect::<Result<Vec<_>, _>>()
                .map(|v| Subset::from_iter(n, v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FinTopology::generate(n, &subbasis))
}

impl CategoryFile {
    pub fn from_category(c: &TopCategory) -> CategoryFile {
        let objects = c.object_names().to_vec();
        let arrows_names = c.arrow_names().to_vec();
        let arrows = (0..c.num_arrows())
            .map(|f| ArrowEntry {
                name: c.arrow_name(f).to_string(),
                src: c.object_name(c.src(f)).to_string(),
                tgt: c.object_name(c.tgt(f)).to_string(),
            })
            .collect();
        let id = (0..c.num_objects())
            .map(|x| (c.object_name(x).to_string(), c.arrow_name(c.id_of(x)).to_string()))
            .collect();
        let mut comp = IndexMap::new();
        for f in 0..c.num_arrows() {
            for g in 0..c.num_arrows() {
                if let Some(h) = c.comp(f, g) {
                    comp.insert(
                        format!("{},{}", c.arrow_name(f), c.arrow_name(g)),
                        c.arrow_name(h).to_string(),
                    );
                }
            }
        }
        CategoryFile {
            opens_obj: basis(c.obj_topology(), &objects),
            opens_arr: basis(c.arr_topology(), &arrows_names),
            objects,
            arrows,
            id,
            comp,
        }
    }

    pub fn to_category(&self) -> Result<TopCategory, String> {
        let obj_index = index_names(&self.objects, "object")?;
        let names: Vec<String> = self.arrows.iter().map(|a| a.name.clone()).collect();
        let arr_index = index_names(&names, "arrow")?;
        let obj = |s: &str| obj_index.get(s).copied().ok_or_else(|| format!("unknown object {s:?}"));
        let arr = |s: &str| arr_index.get(s).copied().ok_or_else(|| format!("unknown arrow {s:?}"));
        let src = self.arrows.iter().map(|a| obj(&a.src)).collect::<Result<Vec<_>, _>>()?;
        let tgt = self.arrows.iter().map(|a| obj(&a.tgt)).collect::<Result<Vec<_>, _>>()?;
        let mut id_of = vec![None; self.objects.len()];
        for (x, f) in &self.id {
            id_of[obj(x)?] = Some(arr(f)?);
        }
        let id_of = id_of
            .into_iter()
            .enumerate()
            .map(|(x, f)| f.ok_or_else(|| format!("object {:?} has no identity", self.objects[x])))
            .collect::<Result<Vec<_>, _>>()?;
        let m = names.len();
        let mut comp = vec![None; m * m];
        for (key, h) in &self.comp {
            let (f, g) = split_pair(key, &arr_index)?;
            comp[f * m + g] = Some(arr(h)?);
        }
        TopCategory::new(CategoryParts {
            objects: self.objects.clone(),
            arrows: names,
            src,
            tgt,
            id_of,
            comp,
            obj_top: topology(&self.opens_obj, &obj_index, "opens_obj")?,
            arr_top: topology(&self.opens_arr, &arr_index, "opens_arr")?,
        })
        .map_err(|e| e.to_string())
    }
}

/// Split a `"f,g"` key; arrow names may contain commas, so the split must be
/// the unique one giving two known arrows.
fn split_pair(key: &str, index: &HashMap<String, usize>) -> Result<(usize, usize), String> {
    let splits: Vec<(usize, usize)> = key
        .match_indices(',')
        .filter_map(|(i, _)| Some((*index.get(&key[..i])?, *index.get(&key[i + 1..])?)))
        .collect();
    match splits.as_slice() {
        [one] => Ok(*one),
        [] => Err(format!("comp key {key:?} is not a pair of arrows")),
        _ => Err(format!("comp key {key:?} splits into arrows in several ways")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub source: String,
    pub target: String,
    pub map: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub source: String,
    pub target: String,
    pub objects: IndexMap<String, String>,
    pub relation: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: String,
    #[serde(rename = "in")]
    pub input: String,
    pub out: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransducerFile {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    #[serde(rename = "final")]
    pub finals: IndexMap<String, String>,
    pub trans: Vec<TransitionEntry>,
}

fn single_char(s: &str) -> Result<char, String> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(format!("{s:?} is not a single letter")),
    }
}

impl TransducerFile {
    pub fn from_transducer(t: &Transducer) -> TransducerFile {
        let states = t.states().to_vec();
        TransducerFile {
            alphabet: t.alphabet().iter().map(|c| c.to_string()).collect(),
            initial: states[t.initial()].clone(),
            finals: (0..t.num_states())
                .filter_map(|q| t.final_output(q).map(|w| (states[q].clone(), w.to_string())))
                .collect(),
            trans: t
                .transitions()
                .into_iter()
                .map(|tr| TransitionEntry {
                    from: states[tr.from].clone(),
                    input: tr.input.to_string(),
                    out: tr.output,
                    to: states[tr.to].clone(),
                })
                .collect(),
            states,
        }
    }

    pub fn to_transducer(&self) -> Result<Transducer, String> {
        let alphabet = self
            .alphabet
            .iter()
            .map(|s| single_char(s))
            .collect::<Result<Vec<_>, _>>()?;
        let index = index_names(&self.states, "state")?;
        let state = |s: &str| index.get(s).copied().ok_or_else(|| format!("unknown state {s:?}"));
        let trans = self
            .trans
            .iter()
            .map(|t| {
                Ok(Transition::new(
                    state(&t.from)?,
                    single_char(&t.input)?,
                    &t.out,
                    state(&t.to)?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let finals = self
            .finals
            .iter()
            .map(|(q, w)| Ok((state(q)?, w.clone())))
            .collect::<Result<Vec<_>, String>>()?;
        Transducer::new(alphabet, self.states.clone(), state(&self.initial)?, trans, finals).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaFile {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

impl DfaFile {
    pub fn from_dfa(d: &Dfa) -> DfaFile {
        DfaFile {
            alphabet: d.alphabet().iter().map(|c| c.to_string()).collect(),
            states: d.num_states(),
            initial: d.initial(),
            accepting: (0..d.num_states()).filter(|&q| d.is_accepting(q)).collect(),
            delta: (0..d.num_states())
                .map(|q| (0..d.alphabet().len()).map(|i| d.next(q, i)).collect())
                .collect(),
        }
    }
}

/// Loaded files by path, so a file named by several hom or functor files
/// is read once.
#[derive(Default)]
pub struct Workspace {
    pub max_base: usize,
    algebras: IndexMap<PathBuf, FinAlgebra>,
    categories: IndexMap<PathBuf, TopCategory>,
}

/// A hom or functor file names its source and target relative to itself.
pub fn resolve(from: &Path, label: &str) -> PathBuf {
    match from.parent() {
        Some(dir) => dir.join(label),
        None => PathBuf::from(label),
    }
}

impl Workspace {
    pub fn new(max_base: usize) -> Workspace {
        Workspace {
            max_base,
            ..Workspace::default()
        }
    }

    pub fn kind(&self, path: &Path) -> Result<Kind, LoadError> {
        kind_of(path, &read(path)?)
    }

    pub fn algebra(&mut self, path: &Path) -> Result<FinAlgebra, LoadError> {
        if let Some(a) = self.algebras.get(path) {
            return Ok(a.clone());
        }
        let text = read(path)?;
        let alg = match kind_of(path, &text)? {
            Kind::Algebra => parse::<AlgebraFile>(path, &text)?.to_algebra(),
            Kind::Concrete => parse::<ConcreteFile>(path, &text)?.to_algebra(self.max_base),
            other => return Err(invalid(path, format!("expected an algebra file, found {other:?}"))),
        }
        .map_err(|m| invalid(path, m))?;
        self.algebras.insert(path.to_path_buf(), alg.clone());
        Ok(alg)
    }

    pub fn category(&mut self, path: &Path) -> Result<TopCategory, LoadError> {
        if let Some(c) = self.categories.get(path) {
            return Ok(c.clone());
        }
        let text = read(path)?;
        if kind_of(path, &text)? != Kind::Category {
            return Err(invalid(path, "expected a category file"));
        }
        let cat = parse::<CategoryFile>(path, &text)?
            .to_category()
            .map_err(|m| invalid(path, m))?;
        self.categories.insert(path.to_path_buf(), cat.clone());
        Ok(cat)
    }

    pub fn hom(&mut self, path: &Path) -> Result<Homomorphism, LoadError> {
        let file: HomFile = parse(path, &read(path)?)?;
        let source = self.algebra(&resolve(path, &file.source))?;
        let target = self.algebra(&resolve(path, &file.target))?;
        let pairs: Vec<(&str, &str)> = file.map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Homomorphism::from_names(source, target, &pairs).map_err(|e| invalid(path, e))
    }

    pub fn functor(&mut self, path: &Path) -> Result<MultiFunctor, LoadError> {
        let file: FunctorFile = parse(path, &read(path)?)?;
        let source = self.category(&resolve(path, &file.source))?;
        let target = self.category(&resolve(path, &file.target))?;
        let mut obj_map = vec![None; source.num_objects()];
        for (x, y) in &file.objects {
            let xi = source.object_index(x).map_err(|e| invalid(path, e))?;
            obj_map[xi] = Some(target.object_index(y).map_err(|e| invalid(path, e))?);
        }
        let obj_map = obj_map
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| invalid(path, format!("object {:?} is not mapped", source.object_name(x)))))
            .collect::<Result<Vec<_>, _>>()?;
        let pairs = file
            .relation
            .iter()
            .map(|(f, g)| {
                Ok((
                    source.arrow_index(f).map_err(|e| invalid(path, e))?,
                    target.arrow_index(g).map_err(|e| invalid(path, e))?,
                ))
            })
            .collect::<Result<Vec<_>, LoadError>>()?;
        MultiFunctor::from_pairs(source, target, obj_map, &pairs).map_err(|e| invalid(path, e))
    }

    pub fn transducer(&mut self, path: &Path) -> Result<Transducer, LoadError> {
        let text = read(path)?;
        if kind_of(path, &text)? != Kind::Transducer {
            return Err(invalid(path, "expected a transducer file"));
        }
        parse::<TransducerFile>(path, &text)?
            .to_transducer()
            .map_err(|m| invalid(path, m))
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serialises");
    s.push('\n');
    s
}
