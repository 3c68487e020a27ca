use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use super::{FiniteGroup, GroupError, DEFAULT_ORDER_BOUND};
use crate::dsl::SubgroupSpec;

/// A loaded group and its named subgroups.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub group: Arc<FiniteGroup>,
    pub subgroups: BTreeMap<String, Vec<usize>>,
}

fn data(m: impl Into<String>) -> GroupError {
    GroupError::Data(m.into())
}

/// `"(1 2)(3 4 5)"` to 1-based cycles; `"e"` and `"()"` are the identity.
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>, GroupError> {
    let s = s.trim();
    if s == "e" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| data(format!("expected `(` in {s:?}")))?;
        let close = body.find(')').ok_or_else(|| data(format!("unclosed cycle in {s:?}")))?;
        let points = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().ok().filter(|&p| p > 0).ok_or_else(|| data(format!("bad point {t:?} in {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if !points.is_empty() {
            out.push(points);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

fn cycles_to_perm(degree: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>, GroupError> {
    let mut p: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    for c in cycles {
        for (w, &x) in c.iter().enumerate() {
            if x == 0 || x > degree || std::mem::replace(&mut used[x - 1], true) {
                return Err(data(format!("cycle {c:?} is not a permutation of {degree} points")));
            }
            p[x - 1] = c[(w + 1) % c.len()] - 1;
        }
    }
    Ok(p)
}

fn generator(v: &Value) -> Result<Vec<Vec<usize>>, GroupError> {
    match v {
        Value::String(s) => parse_cycles(s),
        Value::Array(cs) => cs
            .iter()
            .map(|c| match c {
                Value::String(s) => Ok(parse_cycles(s)?.concat()),
                _ => serde_json::from_value::<Vec<usize>>(c.clone()).map_err(|_| data("a cycle is a list of points")),
            })
            .collect(),
        _ => Err(data("a generator is a cycle string or a list of cycles")),
    }
}

/// `{"order": n, "table": [[...]]}` or `{"perm_degree": d, "generators": [...]}`,
/// optionally with `"labels"` and `"subgroups": {name: [indices] | {"generators": [...]}}`.
pub fn load_group_json(v: &Value) -> Result<GroupData, GroupError> {
    let labels = match v.get("labels") {
        Some(l) => Some(serde_json::from_value::<Vec<String>>(l.clone()).map_err(|_| data("labels must be strings"))?),
        None => None,
    };
    let group = if let Some(t) = v.get("table") {
        let table: Vec<Vec<usize>> =
            serde_json::from_value(t.clone()).map_err(|_| data("table must be a matrix of indices"))?;
        if let Some(n) = v.get("order") {
            if n.as_u64() != Some(table.len() as u64) {
                return Err(data(format!("order {n} does not match a table of {} rows", table.len())));
            }
        }
        FiniteGroup::from_table(table, labels)?
    } else if let Some(d) = v.get("perm_degree") {
        let degree = d.as_u64().ok_or_else(|| data("perm_degree must be a natural number"))? as usize;
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| data("missing generators"))?
            .iter()
            .map(|g| cycles_to_perm(degree, &generator(g)?))
            .collect::<Result<Vec<_>, _>>()?;
        let mut g = FiniteGroup::from_permutations(degree, &gens, DEFAULT_ORDER_BOUND)?;
        if let Some(l) = labels {
            if l.len() != g.order() {
                return Err(data(format!("{} labels for order {}", l.len(), g.order())));
            }
            g.labels = l;
        }
        g
    } else {
        return Err(data("expected `table` or `perm_degree`"));
    };
    let mut gd = GroupData { group: Arc::new(group), subgroups: BTreeMap::new() };
    if let Some(subs) = v.get("subgroups") {
        let subs = subs.as_object().ok_or_else(|| data("subgroups must be an object"))?;
        for (name, s) in subs {
            let spec = match s {
                Value::Array(_) => SubgroupSpec::Elements(
                    serde_json::from_value(s.clone()).map_err(|_| data(format!("subgroup {name}: element list")))?,
                ),
                Value::Object(o) => SubgroupSpec::Generated(
                    o.get("generators")
                        .and_then(Value::as_array)
                        .ok_or_else(|| data(format!("subgroup {name}: missing generators")))?
                        .iter()
                        .map(generator)
                        .collect::<Result<_, _>>()?,
                ),
                _ => return Err(data(format!("subgroup {name}: expected a list or generators"))),
            };
            let k = gd.resolve(&spec)?;
            gd.subgroups.insert(name.clone(), k);
        }
    }
    Ok(gd)
}

impl GroupData {
    pub fn new(group: FiniteGroup) -> Self {
        GroupData { group: Arc::new(group), subgroups: BTreeMap::new() }
    }

    /// Element indices of a subgroup; generated subgroups need a
    /// permutation group.
    pub fn resolve(&self, spec: &SubgroupSpec) -> Result<Vec<usize>, GroupError> {
        let g = &self.group;
        let k = match spec {
            SubgroupSpec::Elements(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
            SubgroupSpec::Named(n) => self.subgroups.get(n).cloned().ok_or_else(|| GroupError::UnknownSubgroup(n.clone()))?,
            SubgroupSpec::Generated(gens) => {
                let degree = g.perms.as_ref().and_then(|p| p.first()).map(Vec::len).ok_or_else(|| {
                    data("generated subgroups need a permutation group; list element indices instead")
                })?;
                let idx = gens
                    .iter()
                    .map(|c| {
                        let p = cycles_to_perm(degree, c)?;
                        g.find_perm(&p).ok_or_else(|| GroupError::NotASubgroup(format!("{} is not in the group", super::cycle_label(&p))))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                g.generated(&idx)
            }
        };
        g.check_subgroup(&k)?;
        Ok(k)
    }
}

/// Command-line subgroup syntax: `{0, 2}`, `<(1 2 3), (1 2)>` or a name.
pub fn parse_subgroup_spec(s: &str) -> Result<SubgroupSpec, GroupError> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix('{') {
        let body = body.strip_suffix('}').ok_or_else(|| data(format!("unclosed `{{` in {s:?}")))?;
        let elems = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| data(format!("bad element {t:?}"))))
            .collect::<Result<_, _>>()?;
        return Ok(SubgroupSpec::Elements(elems));
    }
    if let Some(body) = s.strip_prefix('<') {
        let body = body.strip_suffix('>').ok_or_else(|| data(format!("unclosed `<` in {s:?}")))?;
        // generators are separated by commas outside parentheses
        let mut gens = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, c) in body.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    gens.push(parse_cycles(&body[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if !body[start..].trim().is_empty() {
            gens.push(parse_cycles(&body[start..])?);
        }
        return Ok(SubgroupSpec::Generated(gens));
    }
    if !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Ok(SubgroupSpec::Named(s.into()));
    }
    Err(data(format!("unrecognized subgroup {s:?}")))
}
