use std::collections::HashSet;

use super::lexer::{Lexer, Tok};
use super::{DslDocument, Item, ParseError, ParseErrorKind, Source, SubgroupSpec, TransferChecks, RESERVED};
use crate::engine::{Binding, Kind, RuleSet, Step};
use crate::term::{typecheck, Expr, OneCell, Path, ShadowExpr, Signature, TwoCell};

type PResult<T> = Result<T, ParseError>;

/// Parses a whole document.
pub fn parse_dsl(text: &str) -> Result<DslDocument, ParseError> {
    let mut p = Parser::new(text, Signature::new());
    while p.lex.peek().0 != Tok::Eof {
        p.item()?;
    }
    Ok(DslDocument { sig: p.sig, items: p.done })
}

/// Parses a 2-cell or shadow expression over `sig`.
pub fn parse_expr(sig: &Signature, text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, sig.clone());
    let e = p.expr()?;
    p.eof()?;
    Ok(e)
}

/// Parses a 1-cell word over `sig`.
pub fn parse_word(sig: &Signature, text: &str) -> Result<OneCell, ParseError> {
    let mut p = Parser::new(text, sig.clone());
    let w = p.word()?;
    p.eof()?;
    Ok(w)
}

/// Parses one script line such as `R3 @ / { X = U(A), Y = X, Z = Y }`.
pub fn parse_step(sig: &Signature, rules: &RuleSet, text: &str) -> Result<Step, ParseError> {
    let mut p = Parser::new(text, sig.clone());
    let s = p.step(rules)?;
    p.eof()?;
    Ok(s)
}

struct Parser<'a> {
    lex: Lexer<'a>,
    sig: Signature,
    /// Names of expressions, goals and model objects declared so far.
    names: HashSet<String>,
    rules: Option<(usize, RuleSet)>,
    done: Vec<Item>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sig: Signature) -> Self {
        Parser { lex: Lexer::new(text), sig, names: HashSet::new(), rules: None, done: Vec::new() }
    }

    fn err_at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        let (line, col) = self.lex.line_col(offset);
        ParseError { line, col, kind }
    }

    fn expected<T>(&self, what: &str) -> PResult<T> {
        let (t, at) = self.lex.peek();
        Err(self.err_at(at, ParseErrorKind::Syntax { expected: what.into(), found: t.describe() }))
    }

    fn unresolved<T>(&self, at: usize, what: &'static str, name: &str) -> PResult<T> {
        Err(self.err_at(at, ParseErrorKind::Unresolved { what, name: name.into() }))
    }

    fn invalid<T>(&self, at: usize, msg: impl Into<String>) -> PResult<T> {
        Err(self.err_at(at, ParseErrorKind::Invalid(msg.into())))
    }

    fn eof(&mut self) -> PResult<()> {
        match self.lex.peek().0 {
            Tok::Eof => Ok(()),
            _ => self.expected("end of input"),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.lex.peek().0, Tok::Sym(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.lex.next();
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.expected(&format!("`{s}`"))
        }
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(&self.lex.peek().0, Tok::Ident(x) if x == k)
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.lex.next();
            true
        } else {
            false
        }
    }

    fn kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.expected(&format!("`{k}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, usize)> {
        match self.lex.peek() {
            (Tok::Ident(s), at) => {
                self.lex.next();
                Ok((s, at))
            }
            _ => self.expected(what),
        }
    }

    /// An identifier that is free to be declared.
    fn fresh_name(&mut self, what: &str) -> PResult<(String, usize)> {
        let (n, at) = self.ident(what)?;
        if RESERVED.contains(&n.as_str()) {
            return self.invalid(at, format!("`{n}` is a keyword"));
        }
        Ok((n, at))
    }

    fn num(&mut self, what: &str) -> PResult<(u64, usize)> {
        match self.lex.peek() {
            (Tok::Num(n), at) => {
                self.lex.next();
                Ok((n, at))
            }
            _ => self.expected(what),
        }
    }

    fn zero(&mut self) -> PResult<crate::term::ZeroId> {
        let (n, at) = self.ident("a 0-cell name")?;
        match self.sig.zero_id(&n) {
            Some(z) => Ok(z),
            None => self.unresolved(at, "0-cell", &n),
        }
    }

    fn word(&mut self) -> PResult<OneCell> {
        if self.is_kw("U") && self.lex.peek2() == Tok::Sym("(") {
            self.lex.next();
            self.sym("(")?;
            let z = self.zero()?;
            self.sym(")")?;
            return Ok(OneCell::unit(z));
        }
        let mut w: Option<OneCell> = None;
        loop {
            let (n, at) = self.ident("a 1-cell word")?;
            let Some(g) = self.sig.one_id(&n) else { return self.unresolved(at, "1-cell", &n) };
            let gw = OneCell::gen(&self.sig, g);
            w = Some(match w {
                None => gw,
                Some(prev) => match prev.concat(&gw) {
                    Some(x) => x,
                    None => return self.invalid(at, format!("1-cell word does not compose at `{n}`")),
                },
            });
            if !self.eat_sym("⊗") {
                return Ok(w.unwrap());
            }
        }
    }

    fn word_pair(&mut self) -> PResult<(OneCell, OneCell)> {
        self.sym("(")?;
        let x = self.word()?;
        self.sym(",")?;
        let y = self.word()?;
        self.sym(")")?;
        Ok((x, y))
    }

    fn pair_ref(&mut self) -> PResult<crate::term::PairId> {
        self.sym("[")?;
        let (n, at) = self.ident("a dual pair name")?;
        self.sym("]")?;
        match self.sig.pair_id(&n) {
            Some(p) => Ok(p),
            None => self.unresolved(at, "dual pair", &n),
        }
    }

    /// Whether the next token can begin an expression atom.
    fn atom_starts(&self, t: &Tok) -> bool {
        match t {
            Tok::Sym("(") | Tok::Sym("⟨⟨") => true,
            Tok::Ident(n) => {
                matches!(n.as_str(), "id" | "coev" | "eval" | "gamma" | "theta" | "sid" | "sh")
                    || self.sig.two_id(n).is_some()
            }
            _ => false,
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let at = self.lex.start();
        let mut acc = self.tensor()?;
        while self.is_sym(";") {
            let mut ahead = self.lex.clone();
            ahead.next();
            if !self.atom_starts(&ahead.peek().0) {
                break;
            }
            self.lex.next();
            let rhs = self.tensor()?;
            acc = match (acc, rhs) {
                (Expr::Two(f), Expr::Two(g)) => Expr::Two(TwoCell::vcomp(f, g)),
                (Expr::Shadow(u), Expr::Shadow(v)) => Expr::Shadow(ShadowExpr::scomp(u, v)),
                _ => return self.invalid(at, "`;` joins a 2-cell and a shadow morphism"),
            };
        }
        Ok(acc)
    }

    /// An expression that must also typecheck, as in items and goals.
    fn typed_expr(&mut self) -> PResult<Expr> {
        let at = self.lex.start();
        let e = self.expr()?;
        match typecheck(&self.sig, &e) {
            Ok(_) => Ok(e),
            Err(err) => self.invalid(at, format!("ill-typed expression: {err}")),
        }
    }

    fn tensor(&mut self) -> PResult<Expr> {
        let at = self.lex.start();
        let mut acc = self.atom()?;
        while self.eat_sym("⊗") {
            let rhs = self.atom()?;
            acc = match (acc, rhs) {
                (Expr::Two(f), Expr::Two(g)) => Expr::Two(TwoCell::hcomp(f, g)),
                _ => return self.invalid(at, "`⊗` applies to 2-cells only"),
            };
        }
        Ok(acc)
    }

    fn two(&mut self) -> PResult<TwoCell> {
        let at = self.lex.start();
        match self.expr()? {
            Expr::Two(t) => Ok(t),
            Expr::Shadow(_) => self.invalid(at, "expected a 2-cell, found a shadow morphism"),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let (t, at) = self.lex.peek();
        match t {
            Tok::Sym("(") => {
                self.lex.next();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Tok::Sym("⟨⟨") => {
                self.lex.next();
                let f = self.two()?;
                self.sym("⟩⟩")?;
                Ok(Expr::Shadow(ShadowExpr::Sh(f)))
            }
            Tok::Ident(n) => {
                self.lex.next();
                match n.as_str() {
                    "id" => {
                        self.sym("(")?;
                        let w = self.word()?;
                        self.sym(")")?;
                        Ok(Expr::Two(TwoCell::Id(w)))
                    }
                    "sid" => {
                        self.sym("(")?;
                        let w = self.word()?;
                        self.sym(")")?;
                        Ok(Expr::Shadow(ShadowExpr::SId(w)))
                    }
                    "coev" => Ok(Expr::Two(TwoCell::Coev(self.pair_ref()?))),
                    "eval" => Ok(Expr::Two(TwoCell::Eval(self.pair_ref()?))),
                    "gamma" => {
                        let (x, y) = self.word_pair()?;
                        Ok(Expr::Two(TwoCell::Gamma(x, y)))
                    }
                    "theta" => {
                        let (x, y) = self.word_pair()?;
                        Ok(Expr::Shadow(ShadowExpr::Theta(x, y)))
                    }
                    "sh" => {
                        self.sym("[")?;
                        let f = self.two()?;
                        self.sym("]")?;
                        Ok(Expr::Shadow(ShadowExpr::Sh(f)))
                    }
                    _ => match self.sig.two_id(&n) {
                        Some(g) => Ok(Expr::Two(TwoCell::Gen(g))),
                        None => self.unresolved(at, "2-cell", &n),
                    },
                }
            }
            _ => self.expected("an expression"),
        }
    }

    fn path(&mut self) -> PResult<Path> {
        self.sym("/")?;
        let mut v = Vec::new();
        if let (Tok::Num(_), _) = self.lex.peek() {
            loop {
                let (n, at) = self.num("a child index")?;
                if n > 1 {
                    return self.invalid(at, "child index must be 0 or 1");
                }
                v.push(n as u8);
                if !self.eat_sym("/") {
                    break;
                }
            }
        }
        Ok(Path(v))
    }

    fn step(&mut self, rules: &RuleSet) -> PResult<Step> {
        let (mut name, at) = self.ident("a rule name")?;
        if self.eat_sym("[") {
            let (p, _) = self.ident("a dual pair name")?;
            self.sym("]")?;
            name = format!("{name}[{p}]");
        }
        let Some(rule) = rules.get(&name) else { return self.unresolved(at, "rule", &name) };
        let rule = rule.clone();
        let inverse = self.eat_sym("^-1");
        self.sym("@")?;
        let path = self.path()?;
        let mut step = Step::new(name, inverse, path);
        self.sym("{")?;
        if !self.eat_sym("}") {
            loop {
                let (v, vat) = self.ident("a metavariable")?;
                let Some(kind) = rule.var_kind(&v) else { return self.unresolved(vat, "metavariable", &v) };
                self.sym("=")?;
                let b = match kind {
                    Kind::Zero => Binding::Zero(self.zero()?),
                    Kind::One => Binding::One(self.word()?),
                    Kind::Two => Binding::Two(self.two()?),
                    Kind::Shadow => {
                        let at = self.lex.start();
                        match self.expr()? {
                            Expr::Shadow(s) => Binding::Shadow(s),
                            Expr::Two(_) => return self.invalid(at, "expected a shadow morphism"),
                        }
                    }
                };
                if step.subst.insert(v.clone(), b).is_some() {
                    return self.invalid(vat, format!("metavariable `{v}` bound twice"));
                }
                if self.eat_sym("}") {
                    break;
                }
                self.sym(",")?;
            }
        }
        Ok(step)
    }

    fn goal(&mut self) -> PResult<(String, Expr, Expr)> {
        let (name, at) = self.fresh_name("a goal name")?;
        self.claim(&name, at)?;
        self.sym(":")?;
        let lhs = self.typed_expr()?;
        self.sym("==")?;
        let rhs = self.typed_expr()?;
        Ok((name, lhs, rhs))
    }

    fn claim(&mut self, name: &str, at: usize) -> PResult<()> {
        if !self.names.insert(name.to_string()) {
            return self.invalid(at, format!("`{name}` is already defined"));
        }
        Ok(())
    }

    fn source(&mut self) -> PResult<Source> {
        match self.lex.peek() {
            (Tok::Str(s), _) => {
                self.lex.next();
                Ok(Source::File(s))
            }
            (Tok::Sym("{"), at) => {
                let Some(raw) = self.lex.raw_json() else { return self.invalid(at, "unbalanced inline JSON") };
                match serde_json::from_str(raw) {
                    Ok(v) => Ok(Source::Inline(v)),
                    Err(e) => self.invalid(at, format!("inline JSON: {e}")),
                }
            }
            _ => self.expected("a file name or an inline JSON object"),
        }
    }

    fn model_ref(&mut self, kind: &'static str, ok: impl Fn(&Item) -> bool, items: &[Item]) -> PResult<String> {
        let (n, at) = self.ident(kind)?;
        let found = items.iter().any(|i| ok(i) && model_name(i) == Some(n.as_str()));
        if !found {
            return self.unresolved(at, kind, &n);
        }
        Ok(n)
    }

    fn subgroup(&mut self) -> PResult<SubgroupSpec> {
        if self.eat_sym("{") {
            let mut v = Vec::new();
            if !self.eat_sym("}") {
                loop {
                    v.push(self.num("an element index")?.0 as usize);
                    if self.eat_sym("}") {
                        break;
                    }
                    self.sym(",")?;
                }
            }
            return Ok(SubgroupSpec::Elements(v));
        }
        if self.eat_sym("<") {
            let mut gens = Vec::new();
            loop {
                let mut cycles = Vec::new();
                loop {
                    let at = self.lex.start();
                    self.sym("(")?;
                    let mut c = Vec::new();
                    while let (Tok::Num(n), _) = self.lex.peek() {
                        self.lex.next();
                        if n == 0 {
                            return self.invalid(at, "cycle points are numbered from 1");
                        }
                        c.push(n as usize);
                    }
                    self.sym(")")?;
                    if c.is_empty() {
                        return self.invalid(at, "empty cycle");
                    }
                    cycles.push(c);
                    if !self.is_sym("(") {
                        break;
                    }
                }
                gens.push(cycles);
                if self.eat_sym(">") {
                    break;
                }
                self.sym(",")?;
            }
            return Ok(SubgroupSpec::Generated(gens));
        }
        let (n, _) = self.ident("a subgroup: `{...}`, `<...>` or a name")?;
        Ok(SubgroupSpec::Named(n))
    }

    fn sig_err<T>(&self, at: usize, e: crate::term::SignatureError) -> PResult<T> {
        self.invalid(at, e.to_string())
    }

    fn rules(&mut self) -> RuleSet {
        let key = self.sig.dual_pairs.len() * 4 + usize::from(self.sig.shadow) * 2 + usize::from(!self.sig.symmetric.is_empty());
        match &self.rules {
            Some((k, r)) if *k == key => r.clone(),
            _ => {
                let r = RuleSet::builtin(&self.sig);
                self.rules = Some((key, r.clone()));
                r
            }
        }
    }

    fn item(&mut self) -> PResult<()> {
        let (kw, at) = self.ident("a declaration or task")?;
        let done = std::mem::take(&mut self.done);
        let r = self.item_body(&kw, at, &done);
        self.done = done;
        self.done.push(r?);
        Ok(())
    }

    fn item_body(&mut self, kw: &str, at: usize, done: &[Item]) -> PResult<Item> {
        let item = match kw {
            "0cell" => {
                let mut ids = Vec::new();
                loop {
                    let (n, nat) = self.fresh_name("a 0-cell name")?;
                    match self.sig.add_zero(&n) {
                        Ok(z) => ids.push(z),
                        Err(e) => return self.sig_err(nat, e),
                    }
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                Item::ZeroCells(ids)
            }
            "1cell" => {
                let (n, nat) = self.fresh_name("a 1-cell name")?;
                self.sym(":")?;
                let a = self.zero()?;
                self.sym("->")?;
                let b = self.zero()?;
                match self.sig.add_one(&n, a, b) {
                    Ok(g) => Item::OneCell(g),
                    Err(e) => return self.sig_err(nat, e),
                }
            }
            "2cell" => {
                let (n, nat) = self.fresh_name("a 2-cell name")?;
                self.sym(":")?;
                let x = self.word()?;
                self.sym("=>")?;
                let y = self.word()?;
                match self.sig.add_two(&n, x, y) {
                    Ok(g) => Item::TwoCell(g),
                    Err(e) => return self.sig_err(nat, e),
                }
            }
            "dualpair" => {
                let mut name = String::new();
                if !self.is_sym("(") {
                    name = self.fresh_name("a dual pair name or `(`")?.0;
                    self.sym("=")?;
                }
                let (x, y) = self.word_pair()?;
                match self.sig.add_pair(&name, x, y) {
                    Ok(p) => Item::DualPair(p),
                    Err(e) => return self.sig_err(at, e),
                }
            }
            "shadow" => {
                self.sig.enable_shadow();
                Item::Shadow
            }
            "symmetric" => {
                let z = self.zero()?;
                self.sig.set_symmetric(z);
                Item::Symmetric(z)
            }
            "expr" => {
                let (name, nat) = self.fresh_name("an expression name")?;
                self.claim(&name, nat)?;
                self.sym("=")?;
                let expr = self.typed_expr()?;
                Item::Expr { name, expr }
            }
            "prove" => {
                let (name, lhs, rhs) = self.goal()?;
                self.kw("by")?;
                self.sym("{")?;
                let rules = self.rules();
                let mut steps = Vec::new();
                while !self.eat_sym("}") {
                    steps.push(self.step(&rules)?);
                    self.eat_sym(";");
                }
                return Ok(Item::Prove { name, lhs, rhs, steps });
            }
            "search" => {
                let (name, lhs, rhs) = self.goal()?;
                self.kw("budget")?;
                let budget = self.num("a node budget")?.0 as usize;
                let depth = if self.eat_kw("depth") { Some(self.num("a depth")?.0 as usize) } else { None };
                Item::Search { name, lhs, rhs, budget, depth }
            }
            "algebra" | "group" => {
                let (name, nat) = self.fresh_name("a name")?;
                self.claim(&name, nat)?;
                self.sym("=")?;
                let source = self.source()?;
                if kw == "algebra" {
                    Item::Algebra { name, source }
                } else {
                    Item::Group { name, source }
                }
            }
            "bimodule" => {
                let (name, nat) = self.fresh_name("a bimodule name")?;
                self.claim(&name, nat)?;
                self.sym(":")?;
                let is_alg = |i: &Item| matches!(i, Item::Algebra { .. });
                let left = self.model_ref("algebra", is_alg, done)?;
                self.sym("->")?;
                let right = self.model_ref("algebra", is_alg, done)?;
                self.sym("=")?;
                let source = self.source()?;
                Item::Bimodule { name, left, right, source }
            }
            "cover" => {
                let (name, nat) = self.fresh_name("a cover name")?;
                self.claim(&name, nat)?;
                self.sym("=")?;
                let group = self.model_ref("group", |i| matches!(i, Item::Group { .. }), done)?;
                self.sym("/")?;
                let subgroup = self.subgroup()?;
                Item::Cover { name, group, subgroup }
            }
            "trace" => {
                let bimodule = self.model_ref("bimodule", |i| matches!(i, Item::Bimodule { .. }), done)?;
                Item::Trace { bimodule }
            }
            "transfer" => {
                let cover = self.model_ref("cover", |i| matches!(i, Item::Cover { .. }), done)?;
                let mut checks = TransferChecks::default();
                while let (Tok::Ident(opt), oat) = self.lex.peek() {
                    self.lex.next();
                    match opt.as_str() {
                        "check_bg" => checks.becker_gottlieb = true,
                        "check_euler" => checks.euler = true,
                        "cross_model" => checks.cross_model = true,
                        _ => {
                            return Err(self.err_at(
                                oat,
                                ParseErrorKind::Syntax {
                                    expected: "`check_bg`, `check_euler`, `cross_model` or `;`".into(),
                                    found: format!("`{opt}`"),
                                },
                            ))
                        }
                    }
                }
                Item::Transfer { cover, checks }
            }
            _ => {
                return Err(self.err_at(
                    at,
                    ParseErrorKind::Syntax { expected: "a declaration or task".into(), found: format!("`{kw}`") },
                ))
            }
        };
        self.sym(";")?;
        Ok(item)
    }
}

fn model_name(i: &Item) -> Option<&str> {
    match i {
        Item::Algebra { name, .. } | Item::Bimodule { name, .. } | Item::Group { name, .. } | Item::Cover { name, .. } => {
            Some(name)
        }
        _ => None,
    }
}
