//! Finite groups given by Cayley tables, a small catalog of families and an
//! exact isomorphism test.
//!
//! Elements are indices `0..order`; the identity is always index 0.

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the order of a group built from a spec.
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("malformed group spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error("group order {order} exceeds the configured bound {bound}")]
    TooLarge { order: u128, bound: usize },
    #[error("cayley table violates the {law} law (witness {witness:?})")]
    Law {
        law: GroupLaw,
        witness: (usize, usize, usize),
    },
    #[error("malformed cayley table: {0}")]
    Table(String),
    #[error("cannot read cayley table {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// The group axiom a Cayley table failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupLaw {
    LatinSquare,
    Identity,
    Associativity,
    Inverse,
}

impl fmt::Display for GroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupLaw::LatinSquare => "latin-square",
            GroupLaw::Identity => "identity",
            GroupLaw::Associativity => "associativity",
            GroupLaw::Inverse => "inverse",
        })
    }
}

/// A finite group as a validated Cayley table with the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table, checking every group law.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Table("empty table".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for (a, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::Table(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&c| c >= order) {
                return Err(GroupError::Table(format!(
                    "entry {bad} in row {a} is out of range"
                )));
            }
            table.extend(row);
        }
        let group = FiniteGroup {
            order,
            table,
            name: None,
        };
        group.validate()?;
        Ok(group)
    }

    /// Table built from a known group (e.g. a permutation group); the laws
    /// are only checked in debug builds.
    pub(crate) fn from_trusted_rows(rows: Vec<Vec<usize>>) -> Self {
        let order = rows.len();
        let group = FiniteGroup {
            order,
            table: rows.into_iter().flatten().collect(),
            name: None,
        };
        debug_assert!(order > 256 || group.validate().is_ok());
        group
    }

    fn from_raw(order: usize, table: Vec<usize>, name: impl Into<String>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        FiniteGroup {
            order,
            table,
            name: Some(name.into()),
        }
    }

    /// Parses the text Cayley-table format: the order on the first line,
    /// followed by `order` lines of `order` whitespace-separated indices.
    pub fn parse_table_text(text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GroupError::Table("missing order line".into()))?;
        let order: usize = header
            .parse()
            .map_err(|_| GroupError::Table(format!("bad order line {header:?}")))?;
        let mut rows = Vec::with_capacity(order);
        for (a, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|tok| tok.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::Table(format!("non-integer entry in row {a}")))?;
            rows.push(row);
        }
        if rows.len() != order {
            return Err(GroupError::Table(format!(
                "expected {order} rows, found {}",
                rows.len()
            )));
        }
        Self::from_table(rows)
    }

    pub fn load_table(path: &Path) -> Result<Self, GroupError> {
        let text = fs::read_to_string(path).map_err(|source| GroupError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse_table_text(&text)
    }

    /// Serializes to the text Cayley-table format.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            out.push_str(&self.row(a).iter().join(" "));
            out.push('\n');
        }
        out
    }

    /// Checks the four group laws, reporting the first failure with a witness triple.
    pub fn validate(&self) -> Result<(), GroupError> {
        let m = self.order;
        let law = |law, witness| Err(GroupError::Law { law, witness });
        for a in 0..m {
            let mut row_seen = vec![false; m];
            let mut col_seen = vec![false; m];
            for b in 0..m {
                let r = self.mul(a, b);
                if std::mem::replace(&mut row_seen[r], true) {
                    return law(GroupLaw::LatinSquare, (a, b, r));
                }
                let c = self.mul(b, a);
                if std::mem::replace(&mut col_seen[c], true) {
                    return law(GroupLaw::LatinSquare, (b, a, c));
                }
            }
        }
        for a in 0..m {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return law(GroupLaw::Identity, (0, a, a));
            }
        }
        for a in 0..m {
            for b in 0..m {
                let ab = self.mul(a, b);
                for c in 0..m {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return law(GroupLaw::Associativity, (a, b, c));
                    }
                }
            }
        }
        for a in 0..m {
            if !(0..m).any(|b| self.mul(a, b) == 0) {
                return law(GroupLaw::Inverse, (a, a, 0));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order)
            .find(|&b| self.mul(a, b) == 0)
            .expect("validated group")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        (0..self.order)
            .map(|a| self.element_order(a))
            .sorted()
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order)
            .tuple_combinations()
            .all(|(a, b)| self.mul(a, b) == self.mul(b, a))
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.generated_subgroup(gens).iter().all(|&b| b)
    }

    /// A generating set of minimum size, lexicographically least among those.
    ///
    /// In a minimum generating set no element lies in the subgroup generated by
    /// the others, so the search only extends a prefix by elements outside the
    /// prefix's subgroup.
    pub fn minimal_generating_set(&self) -> Vec<usize> {
        if self.order == 1 {
            return Vec::new();
        }
        let mut size = 1;
        loop {
            let mut chosen = Vec::with_capacity(size);
            if self.search_generators(size, 1, &mut chosen) {
                return chosen;
            }
            size += 1;
        }
    }

    fn search_generators(&self, size: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        let span = self.generated_subgroup(chosen);
        if chosen.len() == size {
            return span.iter().all(|&b| b);
        }
        let remaining = size - chosen.len();
        for (cand, &spanned) in span.iter().enumerate().skip(from) {
            if self.order - cand < remaining {
                break;
            }
            if spanned {
                continue;
            }
            chosen.push(cand);
            if self.search_generators(size, cand + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (m, k) = (self.order, other.order);
        let order = m * k;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let (a1, a2) = (a / k, a % k);
            for b in 0..order {
                let (b1, b2) = (b / k, b % k);
                table.push(self.mul(a1, b1) * k + other.mul(a2, b2));
            }
        }
        let name = match (&self.name, &other.name) {
            (Some(x), Some(y)) => format!("{x}x{y}"),
            _ => format!("product({m},{k})"),
        };
        FiniteGroup::from_raw(order, table, name)
    }
}

pub fn trivial() -> FiniteGroup {
    FiniteGroup::from_raw(1, vec![0], "trivial")
}

/// Cyclic group of order `n`; element `k` is the k-th power of the generator.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group needs n >= 1");
    let table = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a + b) % n))
        .collect();
    FiniteGroup::from_raw(n, table, format!("C{n}"))
}

/// Dihedral group of order `2n`. Element `e*n + k` is `r^k s^e`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1, "dihedral group needs n >= 1");
    let order = 2 * n;
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        let (ea, ka) = (a / n, a % n);
        for b in 0..order {
            let (eb, kb) = (b / n, b % n);
            // r^ka s^ea r^kb s^eb = r^(ka ± kb) s^(ea + eb)
            let k = if ea == 0 {
                (ka + kb) % n
            } else {
                (ka + n - kb) % n
            };
            let e = (ea + eb) % 2;
            table.push(e * n + k);
        }
    }
    FiniteGroup::from_raw(order, table, format!("D{n}"))
}

/// Symmetric group on `n` points, elements in lexicographic order of their
/// image arrays (identity first); `(p·q)(i) = p(q(i))`.
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1, "symmetric group needs n >= 1");
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let index: std::collections::HashMap<&[usize], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let order = perms.len();
    let mut table = Vec::with_capacity(order * order);
    let mut buf = vec![0; n];
    for p in &perms {
        for q in &perms {
            for i in 0..n {
                buf[i] = p[q[i]];
            }
            table.push(index[buf.as_slice()]);
        }
    }
    FiniteGroup::from_raw(order, table, format!("S{n}"))
}

/// Parsed group description: `trivial`, `C<n>`, `D<n>`, `S<n>`,
/// `<spec>x<spec>` (left-associative) or `table:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(PathBuf),
}

impl GroupSpec {
    /// Order of the described group, without building it. `None` for table files.
    pub fn projected_order(&self) -> Option<u128> {
        Some(match self {
            GroupSpec::Trivial => 1,
            GroupSpec::Cyclic(n) => *n as u128,
            GroupSpec::Dihedral(n) => 2 * *n as u128,
            GroupSpec::Symmetric(n) => {
                (1..=*n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))?
            }
            GroupSpec::Product(a, b) => a.projected_order()?.checked_mul(b.projected_order()?)?,
            GroupSpec::Table(_) => return None,
        })
    }

    /// Builds the group, refusing anything whose order exceeds `max_order`.
    pub fn build(&self, max_order: usize) -> Result<FiniteGroup, GroupError> {
        if let Some(order) = self.projected_order_checked() {
            if order > max_order as u128 {
                return Err(GroupError::TooLarge {
                    order,
                    bound: max_order,
                });
            }
        }
        let group = self.build_unchecked()?;
        if group.order() > max_order {
            return Err(GroupError::TooLarge {
                order: group.order() as u128,
                bound: max_order,
            });
        }
        Ok(group.with_name(self.to_string()))
    }

    fn projected_order_checked(&self) -> Option<u128> {
        match self {
            GroupSpec::Table(_) => None,
            GroupSpec::Product(a, b) => {
                // a table factor hides its order; bound the known part
                match (a.projected_order_checked(), b.projected_order_checked()) {
                    (Some(x), Some(y)) => Some(x.saturating_mul(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => None,
                }
            }
            _ => Some(self.projected_order().unwrap_or(u128::MAX)),
        }
    }

    fn build_unchecked(&self) -> Result<FiniteGroup, GroupError> {
        Ok(match self {
            GroupSpec::Trivial => trivial(),
            GroupSpec::Cyclic(n) => cyclic(*n),
            GroupSpec::Dihedral(n) => dihedral(*n),
            GroupSpec::Symmetric(n) => symmetric(*n),
            GroupSpec::Product(a, b) => a.build_unchecked()?.direct_product(&b.build_unchecked()?),
            GroupSpec::Table(path) => FiniteGroup::load_table(path)?,
        })
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GroupError::Parse {
            spec: s.to_owned(),
            reason: reason.to_owned(),
        };
        let s = s.trim();
        if s.is_empty() {
            return Err(err("empty spec"));
        }
        // a table path swallows the rest of the string, 'x' included
        let (factors, table) = match s.find("table:") {
            Some(pos) => {
                let head = &s[..pos];
                let path = &s[pos + "table:".len()..];
                if path.is_empty() {
                    return Err(err("empty table path"));
                }
                if !head.is_empty() && !head.ends_with('x') {
                    return Err(err("table: must start a factor"));
                }
                (
                    head.strip_suffix('x').unwrap_or(head),
                    Some(PathBuf::from(path)),
                )
            }
            None => (s, None),
        };
        let mut parts: Vec<GroupSpec> = Vec::new();
        if !factors.is_empty() {
            for tok in factors.split('x') {
                parts.push(parse_factor(tok).map_err(|r| err(&r))?);
            }
        }
        if let Some(path) = table {
            parts.push(GroupSpec::Table(path));
        }
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or_else(|| err("no factors"))?;
        Ok(iter.fold(first, |acc, next| {
            GroupSpec::Product(Box::new(acc), Box::new(next))
        }))
    }
}

fn parse_factor(tok: &str) -> Result<GroupSpec, String> {
    if tok == "trivial" {
        return Ok(GroupSpec::Trivial);
    }
    let mut chars = tok.chars();
    let family = chars.next().ok_or("empty factor")?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("unrecognized factor {tok:?}"));
    }
    let n: usize = digits
        .parse()
        .map_err(|_| format!("parameter too large in {tok:?}"))?;
    if n == 0 {
        return Err(format!("parameter must be positive in {tok:?}"));
    }
    match family {
        'C' => Ok(GroupSpec::Cyclic(n)),
        'D' => Ok(GroupSpec::Dihedral(n)),
        'S' => Ok(GroupSpec::Symmetric(n)),
        _ => Err(format!("unknown group family {family:?}")),
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Product(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

/// Parses and builds a spec with the given order bound.
pub fn build_group(spec: &str, max_order: usize) -> Result<FiniteGroup, GroupError> {
    spec.parse::<GroupSpec>()?.build(max_order)
}

/// Exact isomorphism test: order and element-order rejection, then
/// backtracking over images of a minimal generating set of `a`.
pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// An isomorphism `a → b` as an element map, if one exists.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return None;
    }
    if a.is_abelian() != b.is_abelian() {
        return None;
    }
    let gens = a.minimal_generating_set();
    let b_orders: Vec<usize> = (0..b.order()).map(|x| b.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = a.element_order(g);
            (0..b.order()).filter(|&y| b_orders[y] == k).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    assign_images(a, b, &gens, &candidates, &mut images)
}

fn assign_images(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let depth = images.len();
    if depth == gens.len() {
        return extend_homomorphism(a, b, gens, images)
            .filter(|map| map.iter().all(|&y| y != usize::MAX));
    }
    for &y in &candidates[depth] {
        images.push(y);
        if extend_homomorphism(a, b, &gens[..=depth], images).is_some() {
            if let Some(map) = assign_images(a, b, gens, candidates, images) {
                return Some(map);
            }
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] ↦ images[i]` over the subgroup the generators span.
/// Returns `None` unless the result is a well-defined injective homomorphism
/// on that subgroup; unmapped elements are `usize::MAX`.
fn extend_homomorphism(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    let mut used = vec![false; b.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = a.mul(x, s);
            let img = b.mul(map[x], t);
            if map[y] == usize::MAX {
                if std::mem::replace(&mut used[img], true) {
                    return None;
                }
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_catalog() -> Vec<FiniteGroup> {
        vec![
            trivial(),
            cyclic(2),
            cyclic(3),
            cyclic(4),
            cyclic(2).direct_product(&cyclic(2)),
            cyclic(5),
            cyclic(6),
            symmetric(3),
            dihedral(3),
            dihedral(4),
            cyclic(8),
            cyclic(2).direct_product(&cyclic(4)),
            dihedral(6),
            symmetric(4),
        ]
    }

    #[test]
    fn catalog_groups_satisfy_group_laws() {
        for g in all_catalog() {
            g.validate().unwrap();
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(build_group("trivial", 64).unwrap().order(), 1);
        let klein = build_group("C2xC2", 64).unwrap();
        assert_eq!(klein.order(), 4);
        assert!((1..4).all(|a| klein.mul(a, a) == 0));
        assert_eq!(
            build_group("S3", 64).unwrap().order_profile(),
            vec![1, 2, 2, 2, 3, 3]
        );
        assert_eq!(build_group("D4", 64).unwrap().order(), 8);
    }

    #[test]
    fn spec_parse_round_trip() {
        for s in [
            "trivial",
            "C7",
            "D4",
            "S3",
            "C2xC2",
            "C2xS3xD5",
            "C3xtable:foo/x.txt",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        match "C2xC3xC4".parse::<GroupSpec>().unwrap() {
            GroupSpec::Product(left, right) => {
                assert!(matches!(*left, GroupSpec::Product(_, _)));
                assert_eq!(*right, GroupSpec::Cyclic(4));
            }
            other => panic!("not left-associative: {other:?}"),
        }
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for s in [
            "",
            "C",
            "C0",
            "Q8",
            "C2x",
            "xC2",
            "c3",
            "C2xtable:",
            "C2table:p",
        ] {
            assert!(
                matches!(s.parse::<GroupSpec>(), Err(GroupError::Parse { .. })),
                "{s:?}"
            );
        }
    }

    #[test]
    fn order_bound_is_a_hard_error() {
        assert!(matches!(
            build_group("S5", 64),
            Err(GroupError::TooLarge { order: 120, .. })
        ));
        assert!(build_group("S5", 120).is_ok());
        assert!(matches!(
            build_group("S40", 64),
            Err(GroupError::TooLarge { .. })
        ));
    }

    #[test]
    fn table_text_round_trip_and_law_witnesses() {
        let g = symmetric(3);
        let back = FiniteGroup::parse_table_text(&g.to_table_text()).unwrap();
        assert_eq!(back.rows(), g.rows());

        // not associative: a quasigroup with identity (the order-5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(loop5) {
            Err(GroupError::Law {
                law: GroupLaw::Associativity,
                witness,
            }) => {
                let (a, b, c) = witness;
                assert!(a < 5 && b < 5 && c < 5);
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
        let bad_identity = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            FiniteGroup::from_table(bad_identity),
            Err(GroupError::Law {
                law: GroupLaw::Identity,
                ..
            })
        ));
        let not_latin = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::from_table(not_latin),
            Err(GroupError::Law {
                law: GroupLaw::LatinSquare,
                ..
            })
        ));
        assert!(matches!(
            FiniteGroup::parse_table_text("2\n0 1\n"),
            Err(GroupError::Table(_))
        ));
    }

    #[test]
    fn minimal_generating_sets() {
        assert!(trivial().minimal_generating_set().is_empty());
        assert_eq!(cyclic(5).minimal_generating_set(), vec![1]);
        let klein = cyclic(2).direct_product(&cyclic(2));
        // brute force: no single element has order 4
        assert!((0..4).all(|a| klein.element_order(a) < 4));
        assert_eq!(klein.minimal_generating_set(), vec![1, 2]);
        assert_eq!(symmetric(3).minimal_generating_set().len(), 2);
        assert_eq!(cyclic(6).minimal_generating_set(), vec![1]);
        for g in all_catalog() {
            let gens = g.minimal_generating_set();
            assert!(g.generates(&gens));
            assert!(!gens.contains(&0) || g.order() == 1);
        }
    }

    #[test]
    fn isomorphism_examples() {
        let klein = cyclic(2).direct_product(&cyclic(2));
        assert!(!are_isomorphic(&cyclic(4), &klein));
        assert!(are_isomorphic(&symmetric(3), &dihedral(3)));
        assert!(are_isomorphic(&trivial(), &trivial()));
        assert!(are_isomorphic(
            &cyclic(6),
            &cyclic(2).direct_product(&cyclic(3))
        ));
        assert!(!are_isomorphic(&cyclic(6), &symmetric(3)));
        assert!(are_isomorphic(&dihedral(2), &klein));
        assert!(!are_isomorphic(
            &dihedral(4),
            &cyclic(2).direct_product(&cyclic(4))
        ));
    }

    #[test]
    fn found_isomorphism_is_a_bijective_homomorphism() {
        let a = dihedral(6);
        let b = symmetric(3).direct_product(&cyclic(2));
        let phi = find_isomorphism(&a, &b).expect("D6 = S3 x C2");
        let mut image = phi.clone();
        image.sort();
        assert_eq!(image, (0..12).collect::<Vec<_>>());
        for x in 0..12 {
            for y in 0..12 {
                assert_eq!(phi[a.mul(x, y)], b.mul(phi[x], phi[y]));
            }
        }
    }
}
