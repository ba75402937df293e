//! Graphviz output. Identity arrows are drawn as doubled loops.

use std::fmt::Write;

use pfdual::topcat::TopCategory;
use pfdual::transducer::{Dfa, Transducer};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn category(name: &str, c: &TopCategory) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for x in 0..c.num_objects() {
        writeln!(out, "  {};", quote(c.object_name(x))).unwrap();
    }
    for f in 0..c.num_arrows() {
        let style = if c.is_identity(f) {
            ", color=\"black:invis:black\""
        } else {
            ""
        };
        writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(c.object_name(c.src(f))),
            quote(c.object_name(c.tgt(f))),
            quote(c.arrow_name(f))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn transducer(name: &str, t: &Transducer) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  __start [shape=point];").unwrap();
    for (q, s) in t.states().iter().enumerate() {
        let shape = if t.final_output(q).is_some() {
            "doublecircle"
        } else {
            "circle"
        };
        let label = match t.final_output(q) {
            Some(w) if !w.is_empty() => format!("{s} / {w}"),
            _ => s.clone(),
        };
        writeln!(out, "  {} [shape={shape}, label={}];", quote(s), quote(&label)).unwrap();
    }
    writeln!(out, "  __start -> {};", quote(&t.states()[t.initial()])).unwrap();
    for tr in t.transitions() {
        let out_word = if tr.output.is_empty() { "ε" } else { &tr.output };
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&t.states()[tr.from]),
            quote(&t.states()[tr.to]),
            quote(&format!("{}/{out_word}", tr.input))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn dfa(name: &str, d: &Dfa) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  __start [shape=point];").unwrap();
    for q in 0..d.num_states() {
        let shape = if d.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(out, "  {q} [shape={shape}];").unwrap();
    }
    writeln!(out, "  __start -> {};", d.initial()).unwrap();
    for q in 0..d.num_states() {
        for (i, c) in d.alphabet().iter().enumerate() {
            writeln!(out, "  {q} -> {} [label={}];", d.next(q, i), quote(&c.to_string())).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
