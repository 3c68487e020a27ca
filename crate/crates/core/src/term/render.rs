//! Canonical text rendering. The DSL parser reads everything printed here.

use super::expr::{Expr, OneCell, ShadowExpr, TwoCell};
use super::signature::Signature;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    #[default]
    Unicode,
    Ascii,
}

impl Style {
    fn tensor(self) -> &'static str {
        match self {
            Style::Unicode => " ⊗ ",
            Style::Ascii => " (x) ",
        }
    }
}

pub fn render_one(sig: &Signature, x: &OneCell, style: Style) -> String {
    if x.is_unit() {
        return format!("U({})", sig.zero(x.src()));
    }
    x.gens()
        .iter()
        .map(|g| sig.one(*g).name.as_str())
        .collect::<Vec<_>>()
        .join(style.tensor())
}

pub fn render_two(sig: &Signature, e: &TwoCell, style: Style) -> String {
    let mut s = String::new();
    two(sig, e, style, &mut s);
    s
}

pub fn render_shadow(sig: &Signature, e: &ShadowExpr, style: Style) -> String {
    let mut s = String::new();
    shadow(sig, e, style, &mut s);
    s
}

pub fn render(sig: &Signature, e: &Expr, style: Style) -> String {
    match e {
        Expr::Two(t) => render_two(sig, t, style),
        Expr::Shadow(s) => render_shadow(sig, s, style),
    }
}

fn two(sig: &Signature, e: &TwoCell, style: Style, out: &mut String) {
    match e {
        TwoCell::Id(x) => {
            out.push_str("id(");
            out.push_str(&render_one(sig, x, style));
            out.push(')');
        }
        TwoCell::Gen(g) => out.push_str(&sig.two(*g).name),
        TwoCell::Coev(p) => {
            out.push_str("coev[");
            out.push_str(&sig.pair(*p).name);
            out.push(']');
        }
        TwoCell::Eval(p) => {
            out.push_str("eval[");
            out.push_str(&sig.pair(*p).name);
            out.push(']');
        }
        TwoCell::Gamma(x, y) => {
            out.push_str("gamma(");
            out.push_str(&render_one(sig, x, style));
            out.push_str(", ");
            out.push_str(&render_one(sig, y, style));
            out.push(')');
        }
        TwoCell::VComp(f, g) => {
            two(sig, f, style, out);
            out.push_str(" ; ");
            paren(matches!(**g, TwoCell::VComp(..)), out, |o| two(sig, g, style, o));
        }
        TwoCell::HComp(f, g) => {
            paren(matches!(**f, TwoCell::VComp(..)), out, |o| two(sig, f, style, o));
            out.push_str(style.tensor());
            paren(matches!(**g, TwoCell::VComp(..) | TwoCell::HComp(..)), out, |o| two(sig, g, style, o));
        }
    }
}

fn shadow(sig: &Signature, e: &ShadowExpr, style: Style, out: &mut String) {
    match e {
        ShadowExpr::Sh(f) => {
            let (open, close) = match style {
                Style::Unicode => ("⟨⟨", "⟩⟩"),
                Style::Ascii => ("sh[", "]"),
            };
            out.push_str(open);
            two(sig, f, style, out);
            out.push_str(close);
        }
        ShadowExpr::Theta(x, y) => {
            out.push_str("theta(");
            out.push_str(&render_one(sig, x, style));
            out.push_str(", ");
            out.push_str(&render_one(sig, y, style));
            out.push(')');
        }
        ShadowExpr::SId(x) => {
            out.push_str("sid(");
            out.push_str(&render_one(sig, x, style));
            out.push(')');
        }
        ShadowExpr::SComp(u, v) => {
            shadow(sig, u, style, out);
            out.push_str(" ; ");
            paren(matches!(**v, ShadowExpr::SComp(..)), out, |o| shadow(sig, v, style, o));
        }
    }
}

fn paren(wrap: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}
