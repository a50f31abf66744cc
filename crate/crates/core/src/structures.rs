//! Finite structures, assignments, teams and relations.
//!
//! Domain elements are the dense integers `0..n`. Teams keep their variables
//! sorted by name and their rows sorted lexicographically, so a sub-team is
//! a bit mask over row indices and equal teams are equal values.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::syntax::{Signature, SyntaxError, Var};

pub type Elem = usize;

/// Sub-teams are enumerated only for teams with at most this many rows by default.
pub const DEFAULT_SUBTEAM_CAP: usize = 20;

/// Upper bound on the number of structures or teams an enumeration may produce.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("element {elem} is outside the domain of size {size}")]
    OutOfDomain { elem: Elem, size: usize },
    #[error("domain must be non-empty")]
    EmptyDomain,
    #[error("variable `{0}` is not in the team's domain")]
    UnknownVariable(String),
    #[error("variable `{0}` listed twice")]
    DuplicateVariable(String),
    #[error("expected {expected} values per tuple, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("team has {size} rows, above the sub-team cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("enumeration of {what} exceeds the bound {bound}")]
    BoundExceeded { what: String, bound: u64 },
    #[error("function `{0}` is not total")]
    PartialFunction(String),
    #[error("invalid signature: {0}")]
    Signature(#[from] SyntaxError),
    #[error("malformed JSON: {0}")]
    Json(String),
}

fn tuple_index(args: &[Elem], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn index_tuple(mut idx: usize, n: usize, arity: usize) -> Vec<Elem> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

fn checked_pow(n: usize, k: usize) -> Option<usize> {
    (0..k).try_fold(1usize, |acc, _| acc.checked_mul(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredTable {
    arity: usize,
    cells: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuncTable {
    arity: usize,
    values: Vec<Elem>,
}

/// A finite first-order structure over the domain `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    domain_size: usize,
    predicates: BTreeMap<String, PredTable>,
    functions: BTreeMap<String, FuncTable>,
}

impl Structure {
    pub fn new(domain_size: usize) -> Result<Self, StructureError> {
        if domain_size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        Ok(Structure {
            domain_size,
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn domain(&self) -> std::ops::Range<Elem> {
        0..self.domain_size
    }

    fn check_tuple(&self, arity: usize, t: &[Elem]) -> Result<(), StructureError> {
        if t.len() != arity {
            return Err(StructureError::ArityMismatch {
                expected: arity,
                found: t.len(),
            });
        }
        match t.iter().find(|&&e| e >= self.domain_size) {
            Some(&elem) => Err(StructureError::OutOfDomain {
                elem,
                size: self.domain_size,
            }),
            None => Ok(()),
        }
    }

    fn check_symbol(&self, name: &str, as_predicate: bool) -> Result<(), StructureError> {
        let mut sig = self.signature();
        if as_predicate {
            sig.add_predicate(name, 0)?;
        } else {
            sig.add_function(name, 0)?;
        }
        Ok(())
    }

    /// Declares predicate `name` and sets its extension.
    pub fn set_predicate<I, T>(
        &mut self,
        name: &str,
        arity: usize,
        tuples: I,
    ) -> Result<(), StructureError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Elem]>,
    {
        self.check_symbol(name, true)?;
        let size =
            checked_pow(self.domain_size, arity).ok_or_else(|| StructureError::BoundExceeded {
                what: format!("table of `{name}`"),
                bound: usize::MAX as u64,
            })?;
        let mut cells = vec![false; size];
        for t in tuples {
            let t = t.as_ref();
            self.check_tuple(arity, t)?;
            cells[tuple_index(t, self.domain_size)] = true;
        }
        self.predicates
            .insert(name.to_string(), PredTable { arity, cells });
        Ok(())
    }

    /// Declares function `name` with values given by `f` on every argument tuple.
    pub fn set_function(
        &mut self,
        name: &str,
        arity: usize,
        f: impl Fn(&[Elem]) -> Elem,
    ) -> Result<(), StructureError> {
        self.check_symbol(name, false)?;
        let n = self.domain_size;
        let size = checked_pow(n, arity).ok_or_else(|| StructureError::BoundExceeded {
            what: format!("table of `{name}`"),
            bound: usize::MAX as u64,
        })?;
        let mut values = Vec::with_capacity(size);
        for i in 0..size {
            let v = f(&index_tuple(i, n, arity));
            if v >= n {
                return Err(StructureError::OutOfDomain { elem: v, size: n });
            }
            values.push(v);
        }
        self.functions
            .insert(name.to_string(), FuncTable { arity, values });
        Ok(())
    }

    pub fn set_constant(&mut self, name: &str, value: Elem) -> Result<(), StructureError> {
        self.set_function(name, 0, |_| value)
    }

    /// `None` if the predicate is undeclared or the tuple has the wrong shape.
    pub fn holds(&self, name: &str, args: &[Elem]) -> Option<bool> {
        let t = self.predicates.get(name)?;
        if args.len() != t.arity || args.iter().any(|&a| a >= self.domain_size) {
            return None;
        }
        Some(t.cells[tuple_index(args, self.domain_size)])
    }

    pub fn apply(&self, name: &str, args: &[Elem]) -> Option<Elem> {
        let t = self.functions.get(name)?;
        if args.len() != t.arity || args.iter().any(|&a| a >= self.domain_size) {
            return None;
        }
        Some(t.values[tuple_index(args, self.domain_size)])
    }

    pub fn predicate_extension(&self, name: &str) -> Option<Vec<Vec<Elem>>> {
        let t = self.predicates.get(name)?;
        Some(
            t.cells
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| index_tuple(i, self.domain_size, t.arity))
                .collect(),
        )
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for (p, t) in &self.predicates {
            sig.add_predicate(p, t.arity)
                .expect("validated on insertion");
        }
        for (f, t) in &self.functions {
            sig.add_function(f, t.arity)
                .expect("validated on insertion");
        }
        sig
    }

    pub fn to_json(&self) -> Value {
        let mut predicates = BTreeMap::new();
        let mut arities = BTreeMap::new();
        for (p, t) in &self.predicates {
            let ext = self.predicate_extension(p).expect("present");
            if ext.is_empty() {
                arities.insert(p.clone(), t.arity);
            }
            predicates.insert(p.clone(), ext);
        }
        let mut functions = BTreeMap::new();
        for (f, t) in &self.functions {
            let table: BTreeMap<String, Elem> = t
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| (format_key(&index_tuple(i, self.domain_size, t.arity)), v))
                .collect();
            functions.insert(f.clone(), table);
        }
        serde_json::to_value(StructureJson {
            domain: self.domain_size,
            predicates,
            functions,
            arities,
        })
        .expect("serializable")
    }

    pub fn from_json(value: &Value) -> Result<Self, StructureError> {
        let raw: StructureJson = serde_json::from_value(value.clone())
            .map_err(|e| StructureError::Json(e.to_string()))?;
        let mut m = Structure::new(raw.domain)?;
        for (p, tuples) in &raw.predicates {
            let arity = match (tuples.first(), raw.arities.get(p)) {
                (Some(t), _) => t.len(),
                (None, Some(&a)) => a,
                (None, None) => {
                    return Err(StructureError::Json(format!(
                        "empty predicate `{p}` needs an entry in \"arities\""
                    )))
                }
            };
            m.set_predicate(p, arity, tuples)?;
        }
        for (f, table) in &raw.functions {
            let mut parsed = BTreeMap::new();
            for (k, &v) in table {
                parsed.insert(parse_key(k)?, v);
            }
            let arity = parsed.keys().next().map(Vec::len).unwrap_or(0);
            let n = m.domain_size;
            let size = checked_pow(n, arity).unwrap_or(usize::MAX);
            if parsed.len() != size || parsed.keys().any(|k| k.len() != arity) {
                return Err(StructureError::PartialFunction(f.clone()));
            }
            for k in parsed.keys() {
                m.check_tuple(arity, k)?;
            }
            m.set_function(f, arity, |args| parsed[args])?;
        }
        Ok(m)
    }

    pub fn from_json_str(text: &str) -> Result<Self, StructureError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureJson {
    domain: usize,
    #[serde(default)]
    predicates: BTreeMap<String, Vec<Vec<Elem>>>,
    #[serde(default)]
    functions: BTreeMap<String, BTreeMap<String, Elem>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    arities: BTreeMap<String, usize>,
}

fn format_key(t: &[Elem]) -> String {
    let inner: Vec<String> = t.iter().map(|e| e.to_string()).collect();
    format!("({})", inner.join(","))
}

fn parse_key(k: &str) -> Result<Vec<Elem>, StructureError> {
    let inner = k
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| StructureError::Json(format!("bad function key `{k}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<Elem>()
                .map_err(|_| StructureError::Json(format!("bad function key `{k}`")))
        })
        .collect()
}

/// A single variable assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<Var, Elem>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Var) -> Option<Elem> {
        self.0.get(v).copied()
    }

    pub fn set(&mut self, v: Var, d: Elem) {
        self.0.insert(v, d);
    }

    pub fn with(mut self, v: &str, d: Elem) -> Self {
        self.set(Var::new(v), d);
        self
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, Elem)> {
        self.0.iter().map(|(v, &d)| (v, d))
    }
}

/// A k-ary relation over a finite domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples<I>(arity: usize, tuples: I) -> Result<Self, StructureError>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut r = Relation::new(arity);
        for t in tuples {
            if t.len() != arity {
                return Err(StructureError::ArityMismatch {
                    expected: arity,
                    found: t.len(),
                });
            }
            r.tuples.insert(t);
        }
        Ok(r)
    }

    /// The full relation `D^arity`.
    pub fn full(arity: usize, n: usize) -> Self {
        let size = checked_pow(n, arity).expect("relation too large");
        Relation {
            arity,
            tuples: (0..size).map(|i| index_tuple(i, n, arity)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.tuples.contains(t)
    }
}

/// A set of assignments over a common, sorted list of variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Team {
    vars: Vec<Var>,
    rows: Vec<Vec<Elem>>,
}

impl Team {
    /// Builds a team; `rows[i][j]` is the value of `vars[j]` in row `i`.
    pub fn new(vars: Vec<Var>, rows: Vec<Vec<Elem>>) -> Result<Self, StructureError> {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        for w in order.windows(2) {
            if vars[w[0]] == vars[w[1]] {
                return Err(StructureError::DuplicateVariable(
                    vars[w[0]].name().to_string(),
                ));
            }
        }
        let mut out_rows = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != vars.len() {
                return Err(StructureError::ArityMismatch {
                    expected: vars.len(),
                    found: r.len(),
                });
            }
            out_rows.push(order.iter().map(|&i| r[i]).collect());
        }
        let sorted_vars = order.iter().map(|&i| vars[i].clone()).collect();
        Ok(Team::canonical(sorted_vars, out_rows))
    }

    fn canonical(vars: Vec<Var>, mut rows: Vec<Vec<Elem>>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        Team { vars, rows }
    }

    pub fn from_names(vars: &[&str], rows: Vec<Vec<Elem>>) -> Result<Self, StructureError> {
        Team::new(vars.iter().map(|v| Var::new(v)).collect(), rows)
    }

    /// The empty team over `vars`.
    pub fn empty(vars: Vec<Var>) -> Self {
        let mut vars = vars;
        vars.sort();
        vars.dedup();
        Team {
            vars,
            rows: Vec::new(),
        }
    }

    /// The team containing only the empty assignment.
    pub fn unit() -> Self {
        Team {
            vars: Vec::new(),
            rows: vec![Vec::new()],
        }
    }

    /// All assignments of values in `0..n` to `vars`.
    pub fn maximal(vars: &[Var], n: usize) -> Result<Self, StructureError> {
        let mut t = Team::unit();
        let domain: Vec<Elem> = (0..n).collect();
        for v in vars {
            t = t.extend_all(v, &domain, n)?;
        }
        Ok(t)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn var_index(&self, v: &Var) -> Option<usize> {
        self.vars.binary_search(v).ok()
    }

    pub fn assignment(&self, row: usize) -> Assignment {
        let mut g = Assignment::new();
        for (v, &d) in self.vars.iter().zip(&self.rows[row]) {
            g.set(v.clone(), d);
        }
        g
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.len()).map(|i| self.assignment(i))
    }

    /// Largest value occurring in the team, if any.
    pub fn max_elem(&self) -> Option<Elem> {
        self.rows.iter().flatten().copied().max()
    }

    pub fn check_domain(&self, n: usize) -> Result<(), StructureError> {
        match self.max_elem() {
            Some(e) if e >= n => Err(StructureError::OutOfDomain { elem: e, size: n }),
            _ => Ok(()),
        }
    }

    /// `X[x↦d]`.
    pub fn extend_const(&self, x: &Var, d: Elem, n: usize) -> Result<Self, StructureError> {
        if d >= n {
            return Err(StructureError::OutOfDomain { elem: d, size: n });
        }
        Ok(self.extend_unchecked(x, std::iter::once(d)))
    }

    /// `X[x↦A]`, the union of `X[x↦d]` over `d` in `values`.
    pub fn extend_all(&self, x: &Var, values: &[Elem], n: usize) -> Result<Self, StructureError> {
        if let Some(&d) = values.iter().find(|&&d| d >= n) {
            return Err(StructureError::OutOfDomain { elem: d, size: n });
        }
        Ok(self.extend_unchecked(x, values.iter().copied()))
    }

    fn extend_unchecked(&self, x: &Var, values: impl Iterator<Item = Elem> + Clone) -> Self {
        match self.vars.binary_search(x) {
            Ok(col) => {
                let rows = self
                    .rows
                    .iter()
                    .flat_map(|r| {
                        values.clone().map(move |d| {
                            let mut r = r.clone();
                            r[col] = d;
                            r
                        })
                    })
                    .collect();
                Team::canonical(self.vars.clone(), rows)
            }
            Err(col) => {
                let mut vars = self.vars.clone();
                vars.insert(col, x.clone());
                let rows = self
                    .rows
                    .iter()
                    .flat_map(|r| {
                        values.clone().map(move |d| {
                            let mut r = r.clone();
                            r.insert(col, d);
                            r
                        })
                    })
                    .collect();
                Team::canonical(vars, rows)
            }
        }
    }

    /// `X|V`, each assignment restricted to `vars`.
    pub fn restrict<'a>(
        &self,
        vars: impl IntoIterator<Item = &'a Var>,
    ) -> Result<Self, StructureError> {
        let mut keep: Vec<Var> = vars.into_iter().cloned().collect();
        keep.sort();
        keep.dedup();
        let cols = keep
            .iter()
            .map(|v| {
                self.var_index(v)
                    .ok_or_else(|| StructureError::UnknownVariable(v.name().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        Ok(Team::canonical(keep, rows))
    }

    /// `X[x1,…,xk]`.
    pub fn team_relation(&self, vars: &[Var]) -> Result<Relation, StructureError> {
        let cols = vars
            .iter()
            .map(|v| {
                self.var_index(v)
                    .ok_or_else(|| StructureError::UnknownVariable(v.name().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Relation {
            arity: vars.len(),
            tuples: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect(),
        })
    }

    /// The team over `vars` whose relation is `rel`.
    pub fn relation_team(rel: &Relation, vars: &[Var]) -> Result<Self, StructureError> {
        if rel.arity != vars.len() {
            return Err(StructureError::ArityMismatch {
                expected: vars.len(),
                found: rel.arity,
            });
        }
        Team::new(vars.to_vec(), rel.tuples.iter().cloned().collect())
    }

    /// The sub-team of rows whose bit is set in `mask`.
    pub fn select(&self, mask: u64) -> Self {
        Team {
            vars: self.vars.clone(),
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i < 64 && mask >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect(),
        }
    }

    /// Bit mask of the rows of `self` that also occur in `sub`.
    pub fn mask_of(&self, sub: &Team) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| sub.rows.binary_search(r).is_ok())
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn is_subteam_of(&self, other: &Team) -> bool {
        self.vars == other.vars
            && self
                .rows
                .iter()
                .all(|r| other.rows.binary_search(r).is_ok())
    }

    /// All sub-team masks in increasing order.
    pub fn subteams(&self, cap: usize) -> Result<std::ops::Range<u64>, StructureError> {
        if self.len() > cap.min(63) {
            return Err(StructureError::CapExceeded {
                size: self.len(),
                cap,
            });
        }
        Ok(0..1u64 << self.len())
    }

    /// Removes one row, keeping the canonical order.
    pub fn without_row(&self, i: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(i);
        Team {
            vars: self.vars.clone(),
            rows,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(TeamJson {
            vars: self.vars.iter().map(|v| v.name().to_string()).collect(),
            rows: self.rows.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &Value) -> Result<Self, StructureError> {
        let raw: TeamJson = serde_json::from_value(value.clone())
            .map_err(|e| StructureError::Json(e.to_string()))?;
        Team::new(raw.vars.iter().map(|v| Var::new(v)).collect(), raw.rows)
    }

    pub fn from_json_str(text: &str) -> Result<Self, StructureError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TeamJson {
    vars: Vec<String>,
    rows: Vec<Vec<Elem>>,
}

/// Every structure over a signature with a fixed domain size, addressable by index.
#[derive(Debug, Clone)]
pub struct StructureSpace {
    n: usize,
    preds: Vec<(String, usize, usize)>,
    funcs: Vec<(String, usize, usize)>,
    count: u64,
}

impl StructureSpace {
    pub fn new(sig: &Signature, n: usize, bound: u64) -> Result<Self, StructureError> {
        if n == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let too_many = || StructureError::BoundExceeded {
            what: format!("structures of size {n}"),
            bound,
        };
        let mut count: u64 = 1;
        let mut preds = Vec::new();
        for (p, k) in sig.predicates() {
            let cells = checked_pow(n, k).ok_or_else(too_many)?;
            for _ in 0..cells {
                count = count.checked_mul(2).ok_or_else(too_many)?;
            }
            preds.push((p.to_string(), k, cells));
        }
        let mut funcs = Vec::new();
        for (f, k) in sig.functions() {
            let cells = checked_pow(n, k).ok_or_else(too_many)?;
            for _ in 0..cells {
                count = count.checked_mul(n as u64).ok_or_else(too_many)?;
            }
            funcs.push((f.to_string(), k, cells));
        }
        if count > bound {
            return Err(too_many());
        }
        Ok(StructureSpace {
            n,
            preds,
            funcs,
            count,
        })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// The structure with the given index; predicate cells are the low-order digits.
    pub fn get(&self, mut index: u64) -> Structure {
        assert!(index < self.count, "structure index out of range");
        let n = self.n;
        let mut m = Structure::new(n).expect("non-empty");
        for (p, k, cells) in &self.preds {
            let tuples: Vec<Vec<Elem>> = (0..*cells)
                .filter(|_| {
                    let bit = index & 1 == 1;
                    index >>= 1;
                    bit
                })
                .map(|i| index_tuple(i, n, *k))
                .collect();
            m.set_predicate(p, *k, &tuples).expect("in range");
        }
        for (f, k, cells) in &self.funcs {
            let values: Vec<Elem> = (0..*cells)
                .map(|_| {
                    let v = (index % n as u64) as Elem;
                    index /= n as u64;
                    v
                })
                .collect();
            m.set_function(f, *k, |args| values[tuple_index(args, n)])
                .expect("in range");
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = Structure> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }
}

/// Every team over a variable list and domain size, addressed by a mask over
/// the lexicographically ordered points of `D^vars`.
#[derive(Debug, Clone)]
pub struct TeamSpace {
    vars: Vec<Var>,
    n: usize,
    points: usize,
}

impl TeamSpace {
    pub fn new(vars: &[Var], n: usize, max_points: usize) -> Result<Self, StructureError> {
        let mut vars = vars.to_vec();
        vars.sort();
        vars.dedup();
        let points = checked_pow(n, vars.len()).unwrap_or(usize::MAX);
        if points > max_points.min(63) {
            return Err(StructureError::BoundExceeded {
                what: format!("teams over {} points", points),
                bound: 1u64 << max_points.min(63),
            });
        }
        Ok(TeamSpace { vars, n, points })
    }

    pub fn count(&self) -> u64 {
        1u64 << self.points
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn get(&self, mask: u64) -> Team {
        let rows = (0..self.points)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| index_tuple(i, self.n, self.vars.len()))
            .collect();
        Team {
            vars: self.vars.clone(),
            rows,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Team> + '_ {
        (0..self.count()).map(move |m| self.get(m))
    }
}

/// Exhaustive streams of structures over `sig` with domain size `n` and of teams over `vars`.
pub fn enumerate(
    sig: &Signature,
    n: usize,
    vars: &[Var],
) -> Result<(StructureSpace, TeamSpace), StructureError> {
    Ok((
        StructureSpace::new(sig, n, DEFAULT_ENUMERATION_BOUND)?,
        TeamSpace::new(vars, n, 24)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    #[test]
    fn extend_const_cases() {
        let empty = Team::empty(vec![v("y")]);
        assert!(empty.extend_const(&v("x"), 0, 2).unwrap().is_empty());
        assert_eq!(
            empty.extend_const(&v("x"), 0, 2).unwrap().vars(),
            &[v("x"), v("y")]
        );

        let t = Team::from_names(&["y"], vec![vec![0], vec![1]]).unwrap();
        let e = t.extend_const(&v("x"), 1, 2).unwrap();
        assert_eq!(
            e,
            Team::from_names(&["y", "x"], vec![vec![0, 1], vec![1, 1]]).unwrap()
        );

        let t = Team::from_names(&["x"], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            t.extend_const(&v("x"), 0, 2).unwrap(),
            Team::from_names(&["x"], vec![vec![0]]).unwrap()
        );
        assert!(t.extend_const(&v("x"), 2, 2).is_err());
    }

    #[test]
    fn extend_all_cases() {
        let unit = Team::unit();
        let e = unit.extend_all(&v("x"), &[0, 1], 2).unwrap();
        assert_eq!(e.rows(), &[vec![0], vec![1]]);
        assert!(Team::empty(vec![])
            .extend_all(&v("x"), &[0, 1], 2)
            .unwrap()
            .is_empty());
        let max = e.extend_all(&v("y"), &[0, 1], 2).unwrap();
        assert_eq!(max.len(), 4);
        assert_eq!(max, Team::maximal(&[v("x"), v("y")], 2).unwrap());
        assert!(unit.extend_all(&v("x"), &[0, 3], 2).is_err());
    }

    #[test]
    fn extend_all_is_union_of_extend_const() {
        let t = Team::from_names(&["x", "y"], vec![vec![0, 1], vec![2, 2], vec![1, 0]]).unwrap();
        for x in ["x", "z"] {
            let all = t.extend_all(&v(x), &[0, 1, 2], 3).unwrap();
            let mut rows = BTreeSet::new();
            for d in 0..3 {
                rows.extend(t.extend_const(&v(x), d, 3).unwrap().rows().iter().cloned());
            }
            assert_eq!(all.rows().iter().cloned().collect::<BTreeSet<_>>(), rows);
        }
    }

    #[test]
    fn restrict_cases() {
        let t = Team::from_names(&["x", "y"], vec![vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(t.restrict(t.vars().to_vec().iter()).unwrap(), t);
        assert_eq!(
            t.restrict([v("x")].iter()).unwrap(),
            Team::from_names(&["x"], vec![vec![0]]).unwrap()
        );
        assert!(t.restrict([v("w")].iter()).is_err());
    }

    #[test]
    fn team_relation_cases() {
        let t = Team::from_names(&["x", "y"], vec![vec![1, 2], vec![3, 4]]).unwrap();
        let r = t.team_relation(&[v("x"), v("y")]).unwrap();
        assert_eq!(r.tuples, BTreeSet::from([vec![1, 2], vec![3, 4]]));
        let max = Team::maximal(&[v("x"), v("y")], 3).unwrap();
        assert_eq!(
            max.team_relation(&[v("x"), v("y")]).unwrap(),
            Relation::full(2, 3)
        );
        assert!(Team::empty(vec![v("x")])
            .team_relation(&[v("x")])
            .unwrap()
            .is_empty());
        assert!(t.team_relation(&[v("q")]).is_err());
    }

    #[test]
    fn relation_team_cases() {
        let r = Relation::from_tuples(2, [vec![0, 1]]).unwrap();
        assert_eq!(
            Team::relation_team(&r, &[v("x"), v("y")]).unwrap(),
            Team::from_names(&["x", "y"], vec![vec![0, 1]]).unwrap()
        );
        assert_eq!(
            Team::relation_team(&Relation::full(2, 2), &[v("x"), v("y")]).unwrap(),
            Team::maximal(&[v("x"), v("y")], 2).unwrap()
        );
        assert!(Team::relation_team(&r, &[v("x")]).is_err());
    }

    #[test]
    fn subteam_enumeration() {
        let t = Team::from_names(&["x"], vec![vec![0], vec![1]]).unwrap();
        let masks: Vec<u64> = t.subteams(20).unwrap().collect();
        assert_eq!(masks, vec![0b00, 0b01, 0b10, 0b11]);
        let e = Team::empty(vec![v("x")]);
        let subs: Vec<Team> = e.subteams(20).unwrap().map(|m| e.select(m)).collect();
        assert_eq!(subs, vec![e.clone()]);
        let nine = Team::maximal(&[v("x"), v("y")], 3).unwrap();
        let subs: BTreeSet<Team> = nine.subteams(20).unwrap().map(|m| nine.select(m)).collect();
        assert_eq!(subs.len(), 512);
        assert!(subs
            .iter()
            .all(|s| s.vars() == nine.vars() && s.is_subteam_of(&nine)));
        assert!(nine.subteams(8).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let xy = [v("x"), v("y")];
        let (_, teams) = enumerate(&Signature::new(), 2, &xy).unwrap();
        assert_eq!(teams.count(), 16);
        let (structs, _) = enumerate(&Signature::new().with_predicate("P", 1), 2, &xy).unwrap();
        assert_eq!(structs.count(), 4);
        let distinct: BTreeSet<_> = structs.iter().map(|m| format!("{:?}", m)).collect();
        assert_eq!(distinct.len(), 4);
        let (_, teams) = enumerate(&Signature::new(), 3, &xy).unwrap();
        let all: BTreeSet<Team> = teams.iter().collect();
        assert_eq!(all.len(), 512);
        let sig = Signature::new().with_function("f", 1).with_constant("c");
        let (s, _) = enumerate(&sig, 3, &xy).unwrap();
        assert_eq!(s.count(), 81);
        assert!(StructureSpace::new(&Signature::new().with_predicate("R", 3), 3, 1 << 20).is_err());
    }

    #[test]
    fn structure_tables() {
        let mut m = Structure::new(3).unwrap();
        m.set_predicate("R", 2, [[0, 1], [2, 2]]).unwrap();
        m.set_function("s", 1, |a| (a[0] + 1) % 3).unwrap();
        m.set_constant("c", 2).unwrap();
        assert_eq!(m.holds("R", &[0, 1]), Some(true));
        assert_eq!(m.holds("R", &[1, 0]), Some(false));
        assert_eq!(m.holds("R", &[0]), None);
        assert_eq!(m.apply("s", &[2]), Some(0));
        assert_eq!(m.apply("c", &[]), Some(2));
        assert!(m.set_predicate("P", 1, [[3]]).is_err());
        assert!(m.set_predicate("s", 1, [[0]]).is_err());
        assert!(Structure::new(0).is_err());
    }

    #[test]
    fn structure_json_format() {
        let mut m = Structure::new(2).unwrap();
        m.set_predicate("P", 1, [[1]]).unwrap();
        m.set_predicate("E", 2, Vec::<Vec<Elem>>::new()).unwrap();
        m.set_function("f", 2, |a| a[0] & a[1]).unwrap();
        m.set_constant("a", 1).unwrap();
        let j = m.to_json();
        assert_eq!(j["domain"], 2);
        assert_eq!(j["predicates"]["P"], serde_json::json!([[1]]));
        assert_eq!(j["functions"]["f"]["(1,1)"], 1);
        assert_eq!(j["functions"]["a"]["()"], 1);
        assert_eq!(Structure::from_json(&j).unwrap(), m);

        let text = r#"{"domain": 2, "predicates": {"P": [[0]]}, "functions": {"f": {"(0)": 1, "( 1 )": 0}}}"#;
        let m2 = Structure::from_json_str(text).unwrap();
        assert_eq!(m2.apply("f", &[1]), Some(0));
        let partial = r#"{"domain": 2, "functions": {"f": {"(0)": 1}}}"#;
        assert!(matches!(
            Structure::from_json_str(partial),
            Err(StructureError::PartialFunction(_))
        ));
        assert!(Structure::from_json_str(r#"{"domain": 2, "predicates": {"P": [[2]]}}"#).is_err());
    }

    #[test]
    fn team_json_format() {
        let t = Team::from_json_str(r#"{"vars": ["y", "x"], "rows": [[1, 0], [0, 0]]}"#).unwrap();
        assert_eq!(t.vars(), &[v("x"), v("y")]);
        assert_eq!(t.rows(), &[vec![0, 0], vec![0, 1]]);
        assert_eq!(Team::from_json(&t.to_json()).unwrap(), t);
        assert!(Team::from_json_str(r#"{"vars": ["x"], "rows": [[1, 0]]}"#).is_err());
        assert!(Team::from_json_str(r#"{"vars": ["x", "x"], "rows": []}"#).is_err());
    }

    proptest! {
        #[test]
        fn relation_team_roundtrip(
            n in 1usize..4,
            raw in proptest::collection::vec((0usize..4, 0usize..4, 0usize..4), 0..12)
        ) {
            let r = Relation::from_tuples(3, raw.into_iter().map(|(a, b, c)| vec![a % n, b % n, c % n])).unwrap();
            let vars = [v("z"), v("a"), v("m")];
            let t = Team::relation_team(&r, &vars).unwrap();
            prop_assert_eq!(t.team_relation(&vars).unwrap(), r);
        }
    }
}
