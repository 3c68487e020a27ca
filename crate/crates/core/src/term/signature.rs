use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::expr::OneCell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroId(pub u32);

/// A 1-cell generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u32);

/// A 2-cell generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoGenId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCellGen {
    pub name: String,
    pub src: ZeroId,
    pub tgt: ZeroId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCellGen {
    pub name: String,
    pub src: OneCell,
    pub tgt: OneCell,
}

/// A declared dual pair `(left, right)` with `left: A -> B` and `right: B -> A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPairDecl {
    pub name: String,
    pub left: OneCell,
    pub right: OneCell,
}

/// Declarations of a shadowed bicategory presented by generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub zero_cells: Vec<String>,
    pub one_cells: Vec<OneCellGen>,
    pub two_cells: Vec<TwoCellGen>,
    pub dual_pairs: Vec<DualPairDecl>,
    /// 0-cells whose endo-hom category is declared symmetric monoidal.
    pub symmetric: BTreeSet<ZeroId>,
    pub shadow: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    DuplicateGenerator,
    UnknownCell,
    IllTypedWord,
    NonParallelTwoCell,
    DualPairBoundaryMismatch,
    DuplicateDualPair,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::DuplicateGenerator => "duplicate generator",
            DiagnosticKind::UnknownCell => "unknown cell",
            DiagnosticKind::IllTypedWord => "ill-typed 1-cell word",
            DiagnosticKind::NonParallelTwoCell => "2-cell boundary not parallel",
            DiagnosticKind::DualPairBoundaryMismatch => "dual pair boundary mismatch",
            DiagnosticKind::DuplicateDualPair => "duplicate dual pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// Which declaration the problem was found in, e.g. `dualpair dp1`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.location, self.kind.as_str(), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("1-cell word does not chain at `{name}`")]
    Chain { name: String },
    #[error("invalid declaration: {0}")]
    Invalid(String),
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_zero(&mut self, name: &str) -> Result<ZeroId, SignatureError> {
        if self.zero_id(name).is_some() {
            return Err(SignatureError::Duplicate { kind: "0-cell", name: name.into() });
        }
        self.zero_cells.push(name.to_string());
        Ok(ZeroId(self.zero_cells.len() as u32 - 1))
    }

    pub fn add_one(&mut self, name: &str, src: ZeroId, tgt: ZeroId) -> Result<GenId, SignatureError> {
        if self.one_id(name).is_some() {
            return Err(SignatureError::Duplicate { kind: "1-cell", name: name.into() });
        }
        self.one_cells.push(OneCellGen { name: name.to_string(), src, tgt });
        Ok(GenId(self.one_cells.len() as u32 - 1))
    }

    pub fn add_two(&mut self, name: &str, src: OneCell, tgt: OneCell) -> Result<TwoGenId, SignatureError> {
        if self.two_id(name).is_some() {
            return Err(SignatureError::Duplicate { kind: "2-cell", name: name.into() });
        }
        if src.src() != tgt.src() || src.tgt() != tgt.tgt() {
            return Err(SignatureError::Invalid(format!("2-cell `{name}` has non-parallel boundary")));
        }
        self.two_cells.push(TwoCellGen { name: name.to_string(), src, tgt });
        Ok(TwoGenId(self.two_cells.len() as u32 - 1))
    }

    /// Declares a dual pair. An empty `name` picks `dp<n>`.
    pub fn add_pair(&mut self, name: &str, left: OneCell, right: OneCell) -> Result<PairId, SignatureError> {
        let name = if name.is_empty() {
            format!("dp{}", self.dual_pairs.len() + 1)
        } else {
            name.to_string()
        };
        if self.pair_id(&name).is_some() {
            return Err(SignatureError::Duplicate { kind: "dual pair", name });
        }
        if left.src() != right.tgt() || left.tgt() != right.src() {
            return Err(SignatureError::Invalid(format!("dual pair `{name}`: boundary mismatch")));
        }
        if self.pair_by_words(&left, &right).is_some() {
            return Err(SignatureError::Duplicate { kind: "dual pair", name });
        }
        self.dual_pairs.push(DualPairDecl { name, left, right });
        Ok(PairId(self.dual_pairs.len() as u32 - 1))
    }

    pub fn set_symmetric(&mut self, a: ZeroId) {
        self.symmetric.insert(a);
    }

    pub fn enable_shadow(&mut self) {
        self.shadow = true;
    }

    pub fn zero_id(&self, name: &str) -> Option<ZeroId> {
        self.zero_cells.iter().position(|n| n == name).map(|i| ZeroId(i as u32))
    }

    pub fn one_id(&self, name: &str) -> Option<GenId> {
        self.one_cells.iter().position(|g| g.name == name).map(|i| GenId(i as u32))
    }

    pub fn two_id(&self, name: &str) -> Option<TwoGenId> {
        self.two_cells.iter().position(|g| g.name == name).map(|i| TwoGenId(i as u32))
    }

    pub fn pair_id(&self, name: &str) -> Option<PairId> {
        self.dual_pairs.iter().position(|p| p.name == name).map(|i| PairId(i as u32))
    }

    pub fn pair_by_words(&self, left: &OneCell, right: &OneCell) -> Option<PairId> {
        self.dual_pairs
            .iter()
            .position(|p| &p.left == left && &p.right == right)
            .map(|i| PairId(i as u32))
    }

    pub fn zero(&self, id: ZeroId) -> &str {
        &self.zero_cells[id.0 as usize]
    }

    pub fn one(&self, id: GenId) -> &OneCellGen {
        &self.one_cells[id.0 as usize]
    }

    pub fn two(&self, id: TwoGenId) -> &TwoCellGen {
        &self.two_cells[id.0 as usize]
    }

    pub fn pair(&self, id: PairId) -> &DualPairDecl {
        &self.dual_pairs[id.0 as usize]
    }

    pub fn is_symmetric(&self, a: ZeroId) -> bool {
        self.symmetric.contains(&a)
    }

    pub fn unit(&self, a: ZeroId) -> OneCell {
        OneCell::unit(a)
    }

    /// The word spelled by generator names, e.g. `["S_f", "DS_f"]`.
    pub fn word(&self, names: &[&str]) -> Result<OneCell, SignatureError> {
        let mut gens = Vec::with_capacity(names.len());
        for n in names {
            gens.push(
                self.one_id(n)
                    .ok_or_else(|| SignatureError::Unknown { kind: "1-cell", name: n.to_string() })?,
            );
        }
        let Some(first) = gens.first() else {
            return Err(SignatureError::Invalid("empty word needs a 0-cell; use `unit`".into()));
        };
        let mut w = OneCell::gen(self, *first);
        for g in &gens[1..] {
            w = w
                .concat(&OneCell::gen(self, *g))
                .ok_or_else(|| SignatureError::Chain { name: self.one(*g).name.clone() })?;
        }
        Ok(w)
    }

    /// Whether a word's stored boundary agrees with its generators.
    pub fn word_is_well_typed(&self, w: &OneCell) -> bool {
        if w.src().0 as usize >= self.zero_cells.len() || w.tgt().0 as usize >= self.zero_cells.len() {
            return false;
        }
        let mut at = w.src();
        for g in w.gens() {
            let Some(decl) = self.one_cells.get(g.0 as usize) else {
                return false;
            };
            if decl.src != at {
                return false;
            }
            at = decl.tgt;
        }
        at == w.tgt()
    }
}

/// Checks every signature invariant and reports one diagnostic per violation.
pub fn validate_signature(sig: &Signature) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let dup = |kind_name: &str, names: &mut dyn Iterator<Item = &String>, out: &mut Vec<Diagnostic>| {
        let mut seen = HashSet::new();
        for n in names {
            if !seen.insert(n.clone()) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::DuplicateGenerator,
                    location: format!("{kind_name} {n}"),
                    message: format!("name `{n}` declared more than once"),
                });
            }
        }
    };
    dup("0cell", &mut sig.zero_cells.iter(), &mut out);
    dup("1cell", &mut sig.one_cells.iter().map(|g| &g.name), &mut out);
    dup("2cell", &mut sig.two_cells.iter().map(|g| &g.name), &mut out);
    dup("dualpair", &mut sig.dual_pairs.iter().map(|p| &p.name), &mut out);

    let nz = sig.zero_cells.len() as u32;
    for g in &sig.one_cells {
        if g.src.0 >= nz || g.tgt.0 >= nz {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownCell,
                location: format!("1cell {}", g.name),
                message: "boundary refers to an undeclared 0-cell".into(),
            });
        }
    }
    for g in &sig.two_cells {
        let loc = format!("2cell {}", g.name);
        let mut ok = true;
        for w in [&g.src, &g.tgt] {
            if !sig.word_is_well_typed(w) {
                ok = false;
                out.push(Diagnostic {
                    kind: DiagnosticKind::IllTypedWord,
                    location: loc.clone(),
                    message: "boundary word does not type-check".into(),
                });
            }
        }
        if ok && (g.src.src() != g.tgt.src() || g.src.tgt() != g.tgt.tgt()) {
            out.push(Diagnostic {
                kind: DiagnosticKind::NonParallelTwoCell,
                location: loc,
                message: "source and target live in different hom-categories".into(),
            });
        }
    }
    let mut seen_pairs: Vec<(&OneCell, &OneCell)> = Vec::new();
    for p in &sig.dual_pairs {
        let loc = format!("dualpair {}", p.name);
        let typed = sig.word_is_well_typed(&p.left) && sig.word_is_well_typed(&p.right);
        if !typed {
            out.push(Diagnostic {
                kind: DiagnosticKind::IllTypedWord,
                location: loc.clone(),
                message: "1-cell of dual pair does not type-check".into(),
            });
            continue;
        }
        if p.left.src() != p.right.tgt() || p.left.tgt() != p.right.src() {
            out.push(Diagnostic {
                kind: DiagnosticKind::DualPairBoundaryMismatch,
                location: loc.clone(),
                message: format!(
                    "X: {} -> {} requires Y: {} -> {}",
                    sig.zero(p.left.src()),
                    sig.zero(p.left.tgt()),
                    sig.zero(p.left.tgt()),
                    sig.zero(p.left.src())
                ),
            });
        }
        if seen_pairs.iter().any(|(l, r)| *l == &p.left && *r == &p.right) {
            out.push(Diagnostic {
                kind: DiagnosticKind::DuplicateDualPair,
                location: loc,
                message: "same (X, Y) declared twice".into(),
            });
        }
        seen_pairs.push((&p.left, &p.right));
    }
    for a in &sig.symmetric {
        if a.0 >= nz {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownCell,
                location: "symmetric".into(),
                message: "flag on an undeclared 0-cell".into(),
            });
        }
    }
    out
}
