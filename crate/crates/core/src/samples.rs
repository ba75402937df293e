//! Small fixed instances used by tests, examples and the command line.

use crate::algebra::{FinAlgebra, Homomorphism};
use crate::pfun::{self, Base, PFunc};
use crate::topcat::{CategoryParts, FinTopology, TopCategory};
use crate::transducer::{Transducer, Transition};

/// Element names of the eight-element running example, in canonical order.
pub const EX1_NAMES: [&str; 8] = ["0", "e12", "e3", "1", "s", "s3", "c", "c3"];

/// The eight partial functions on {1, 2, 3}: the empty function, identities
/// on {1,2}, {3} and {1,2,3}, the swap s of 1 and 2, s extended by 3 ↦ 3,
/// the map c sending 1 and 2 to 3, and c extended by 3 ↦ 3.
pub fn ex1_functions() -> (Vec<String>, Vec<PFunc>) {
    let base = Base::numbered(3);
    let graphs: [&[(&str, &str)]; 8] = [
        &[],
        &[("1", "1"), ("2", "2")],
        &[("3", "3")],
        &[("1", "1"), ("2", "2"), ("3", "3")],
        &[("1", "2"), ("2", "1")],
        &[("1", "2"), ("2", "1"), ("3", "3")],
        &[("1", "3"), ("2", "3")],
        &[("1", "3"), ("2", "3"), ("3", "3")],
    ];
    let fs = graphs
        .iter()
        .map(|g| PFunc::from_pairs(&base, g).expect("fixed graphs are functional"))
        .collect();
    (EX1_NAMES.iter().map(|s| s.to_string()).collect(), fs)
}

pub fn ex1() -> FinAlgebra {
    let (names, fs) = ex1_functions();
    pfun::as_abstract(&fs, Some(&names))
        .expect("running example is closed")
        .0
}

/// The six-element subalgebra without c and c3.
pub fn ex1b() -> FinAlgebra {
    let (names, fs) = ex1_functions();
    let keep = 6;
    pfun::as_abstract(&fs[..keep], Some(&names[..keep]))
        .expect("subalgebra is closed")
        .0
}

pub fn ex1b_inclusion() -> Homomorphism {
    Homomorphism::inclusion(ex1b(), ex1()).expect("names of the subalgebra occur in the algebra")
}

/// The algebra with a single element, where 0 = id.
pub fn one_element() -> FinAlgebra {
    FinAlgebra::from_tables(vec!["0".into()], vec![0], vec![0], vec![0], vec![0]).expect("valid tables")
}

/// Discrete category on objects x, y, z with a: x → y, b, c: y → z and
/// d: x → z, where a·b = a·c = d. Arrows b and c are both cancelled by a,
/// so a is not an epimorphism.
pub fn non_epi_category() -> TopCategory {
    let arrows = ["1x", "1y", "1z", "a", "b", "c", "d"];
    let src = vec![0, 1, 2, 0, 1, 1, 0];
    let tgt = vec![0, 1, 2, 1, 2, 2, 2];
    let m = arrows.len();
    let mut comp = vec![None; m * m];
    for f in 0..m {
        comp[src[f] * m + f] = Some(f);
        comp[f * m + tgt[f]] = Some(f);
    }
    comp[3 * m + 4] = Some(6);
    comp[3 * m + 5] = Some(6);
    TopCategory::new(CategoryParts {
        objects: vec!["x".into(), "y".into(), "z".into()],
        arrows: arrows.iter().map(|s| s.to_string()).collect(),
        src,
        tgt,
        id_of: vec![0, 1, 2],
        comp,
        obj_top: FinTopology::discrete(3),
        arr_top: FinTopology::discrete(m),
    })
    .expect("well-formed category")
}

/// One object, one arrow, discrete.
pub fn point_category() -> TopCategory {
    TopCategory::discrete_on(vec!["x".into()], FinTopology::discrete(1)).expect("well-formed category")
}

/// Identity on a* over {a, b}.
pub fn t1() -> Transducer {
    Transducer::new(
        vec!['a', 'b'],
        vec!["q0".into()],
        0,
        vec![Transition::new(0, 'a', "a", 0)],
        vec![(0, String::new())],
    )
    .expect("well-formed transducer")
}

/// aⁿb ↦ bⁿ over {a, b}.
pub fn t2() -> Transducer {
    Transducer::new(
        vec!['a', 'b'],
        vec!["q0".into(), "q1".into()],
        0,
        vec![Transition::new(0, 'a', "b", 0), Transition::new(0, 'b', "", 1)],
        vec![(1, String::new())],
    )
    .expect("well-formed transducer")
}
