use std::fmt::Write as _;

use super::{DslDocument, Item, Source, SubgroupSpec};
use crate::engine::{render_step, RuleSet, Step};
use crate::term::{render, render_one, Style};

/// Drops the 2-cell and shadow bindings a step's redex already determines,
/// leaving what the printed form keeps.
pub fn canonical_steps(rules: &RuleSet, steps: &[Step]) -> Vec<Step> {
    steps
        .iter()
        .map(|s| {
            let mut s = s.clone();
            if let Some(r) = rules.get(&s.rule) {
                let from = r.side(s.inverse).0.vars();
                s.subst.retain(|k, b| {
                    !(matches!(b.kind(), crate::engine::Kind::Two | crate::engine::Kind::Shadow) && from.contains(k))
                });
            }
            s
        })
        .collect()
}

fn source(s: &Source) -> String {
    match s {
        Source::File(p) => serde_json::to_string(p).expect("string"),
        Source::Inline(v) => v.to_string(),
    }
}

fn subgroup(s: &SubgroupSpec) -> String {
    match s {
        SubgroupSpec::Elements(v) => {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", parts.join(", "))
        }
        SubgroupSpec::Named(n) => n.clone(),
        SubgroupSpec::Generated(gens) => {
            let parts: Vec<String> = gens
                .iter()
                .map(|cycles| {
                    cycles
                        .iter()
                        .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
                        .collect()
                })
                .collect();
            format!("<{}>", parts.join(", "))
        }
    }
}

/// One item in canonical form, with its trailing newline.
pub fn print_item(doc: &DslDocument, rules: &RuleSet, item: &Item, style: Style) -> String {
    let sig = &doc.sig;
    let e = |x| render(sig, x, style);
    let mut out = String::new();
    match item {
        Item::ZeroCells(ids) => {
            let names: Vec<&str> = ids.iter().map(|z| sig.zero(*z)).collect();
            let _ = writeln!(out, "0cell {};", names.join(", "));
        }
        Item::OneCell(g) => {
            let d = sig.one(*g);
            let _ = writeln!(out, "1cell {} : {} -> {};", d.name, sig.zero(d.src), sig.zero(d.tgt));
        }
        Item::TwoCell(g) => {
            let d = sig.two(*g);
            let _ = writeln!(out, "2cell {} : {} => {};", d.name, render_one(sig, &d.src, style), render_one(sig, &d.tgt, style));
        }
        Item::DualPair(p) => {
            let d = sig.pair(*p);
            let _ = writeln!(
                out,
                "dualpair {} = ({}, {});",
                d.name,
                render_one(sig, &d.left, style),
                render_one(sig, &d.right, style)
            );
        }
        Item::Shadow => out.push_str("shadow;\n"),
        Item::Symmetric(z) => {
            let _ = writeln!(out, "symmetric {};", sig.zero(*z));
        }
        Item::Expr { name, expr } => {
            let _ = writeln!(out, "expr {name} = {};", e(expr));
        }
        Item::Prove { name, lhs, rhs, steps } => {
            let _ = write!(out, "prove {name} : {} == {} by {{", e(lhs), e(rhs));
            if steps.is_empty() {
                out.push_str("}\n");
            } else {
                out.push('\n');
                for s in steps {
                    let _ = writeln!(out, "  {}", render_step(sig, rules, s, style));
                }
                out.push_str("}\n");
            }
        }
        Item::Search { name, lhs, rhs, budget, depth } => {
            let _ = write!(out, "search {name} : {} == {} budget {budget}", e(lhs), e(rhs));
            if let Some(d) = depth {
                let _ = write!(out, " depth {d}");
            }
            out.push_str(";\n");
        }
        Item::Algebra { name, source: s } => {
            let _ = writeln!(out, "algebra {name} = {};", source(s));
        }
        Item::Bimodule { name, left, right, source: s } => {
            let _ = writeln!(out, "bimodule {name} : {left} -> {right} = {};", source(s));
        }
        Item::Group { name, source: s } => {
            let _ = writeln!(out, "group {name} = {};", source(s));
        }
        Item::Cover { name, group, subgroup: s } => {
            let _ = writeln!(out, "cover {name} = {group} / {};", subgroup(s));
        }
        Item::Trace { bimodule } => {
            let _ = writeln!(out, "trace {bimodule};");
        }
        Item::Transfer { cover, checks } => {
            out.push_str("transfer ");
            out.push_str(cover);
            for (on, flag) in
                [(checks.becker_gottlieb, "check_bg"), (checks.euler, "check_euler"), (checks.cross_model, "cross_model")]
            {
                if on {
                    out.push(' ');
                    out.push_str(flag);
                }
            }
            out.push_str(";\n");
        }
    }
    out
}

/// The canonical text of a document. Goals and tasks are set off by a blank
/// line.
pub fn print_document(doc: &DslDocument, style: Style) -> String {
    let rules = RuleSet::builtin(&doc.sig);
    let mut out = String::new();
    let mut prev_decl = None;
    for item in &doc.items {
        let decl = !item.is_task();
        if prev_decl.is_some() && (prev_decl != Some(decl) || !decl) {
            out.push('\n');
        }
        out.push_str(&print_item(doc, &rules, item, style));
        prev_decl = Some(decl);
    }
    out
}
