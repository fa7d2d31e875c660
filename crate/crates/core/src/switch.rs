//! Finite doodle switches stored as multiplication tables.
//!
//! Elements are the indices `1..=n`. Row `a`, column `b` of the table holds
//! `a · b`. Internally cells are kept 0-based in a flat row-major vector; every
//! public method speaks 1-based indices.

use std::fmt;

use thiserror::Error;

/// Largest order accepted by [`FiniteDoodleSwitch`]. Coloring domains are
/// `u64` bitmasks.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("empty table")]
    Empty,
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(usize),
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row},{col}) is outside 1..={order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `a · b = b · a` iff `a = b`.
    Commutation,
    /// Unique left division: every column is a permutation.
    LeftDivision,
    /// `S(a, b) = (b · a, a · b)` is a bijection.
    SwitchBijective,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Commutation => "1",
            Axiom::LeftDivision => "2a",
            Axiom::SwitchBijective => "2b",
        })
    }
}

/// Elements exhibiting an axiom failure. All indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `a ≠ b` but `a · b = b · a`.
    Commuting { a: usize, b: usize },
    /// Two rows hold the same value in one column.
    ColumnRepeat { rows: (usize, usize), column: usize },
    /// Two distinct pairs with the same image under `S`.
    SwitchCollision {
        first: (usize, usize),
        second: (usize, usize),
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Commuting { a, b } => write!(f, "({a},{b})"),
            Witness::ColumnRepeat { rows, column } => {
                write!(f, "({},{},{})", rows.0, rows.1, column)
            }
            Witness::SwitchCollision { first, second } => {
                write!(f, "({},{}) and ({},{})", first.0, first.1, second.0, second.1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("axiom {axiom} violated at {witness}")]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Witness,
}

impl AxiomViolation {
    /// Re-evaluates the named axiom on the witness alone. Returns `true` when
    /// the witness really does break it.
    pub fn recheck(&self, rows: &[Vec<usize>]) -> bool {
        let at = |a: usize, b: usize| rows[a - 1][b - 1];
        match (&self.axiom, &self.witness) {
            (Axiom::Commutation, Witness::Commuting { a, b }) => a != b && at(*a, *b) == at(*b, *a),
            (Axiom::LeftDivision, Witness::ColumnRepeat { rows: (r1, r2), column }) => {
                r1 != r2 && at(*r1, *column) == at(*r2, *column)
            }
            (Axiom::SwitchBijective, Witness::SwitchCollision { first, second }) => {
                let s = |(a, b): (usize, usize)| (at(b, a), at(a, b));
                first != second && s(*first) == s(*second)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomReport {
    Valid,
    Invalid(AxiomViolation),
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, AxiomReport::Valid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwitchError {
    #[error("malformed table: {0}")]
    Malformed(#[from] TableError),
    #[error(transparent)]
    Axiom(#[from] AxiomViolation),
}

fn check_shape(rows: &[Vec<usize>]) -> Result<usize, TableError> {
    let n = rows.len();
    if n == 0 {
        return Err(TableError::Empty);
    }
    if n > MAX_ORDER {
        return Err(TableError::TooLarge(n));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(TableError::NotSquare {
                row: i + 1,
                len: row.len(),
                order: n,
            });
        }
        for (j, &value) in row.iter().enumerate() {
            if value == 0 || value > n {
                return Err(TableError::OutOfRange {
                    row: i + 1,
                    col: j + 1,
                    value,
                    order: n,
                });
            }
        }
    }
    Ok(n)
}

/// Checks the three switch axioms in the order 1, 2a, 2b and reports the first
/// violation found scanning cells row-major.
pub fn verify_axioms(rows: &[Vec<usize>]) -> Result<AxiomReport, TableError> {
    let n = check_shape(rows)?;
    let at = |a: usize, b: usize| rows[a][b];

    for a in 0..n {
        for b in 0..n {
            if a != b && at(a, b) == at(b, a) {
                return Ok(AxiomReport::Invalid(AxiomViolation {
                    axiom: Axiom::Commutation,
                    witness: Witness::Commuting { a: a + 1, b: b + 1 },
                }));
            }
        }
    }

    // seen[col][value] = first row holding value in col
    let mut seen = vec![vec![None; n + 1]; n];
    for a in 0..n {
        for (b, column) in seen.iter_mut().enumerate() {
            let v = at(a, b);
            if let Some(prev) = column[v] {
                return Ok(AxiomReport::Invalid(AxiomViolation {
                    axiom: Axiom::LeftDivision,
                    witness: Witness::ColumnRepeat {
                        rows: (prev + 1, a + 1),
                        column: b + 1,
                    },
                }));
            }
            column[v] = Some(a);
        }
    }

    let mut preimage = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            let image = (at(b, a) - 1) * n + (at(a, b) - 1);
            if let Some((pa, pb)) = preimage[image] {
                return Ok(AxiomReport::Invalid(AxiomViolation {
                    axiom: Axiom::SwitchBijective,
                    witness: Witness::SwitchCollision {
                        first: (pa + 1, pb + 1),
                        second: (a + 1, b + 1),
                    },
                }));
            }
            preimage[image] = Some((a, b));
        }
    }
    Ok(AxiomReport::Valid)
}

/// Parses the plain-text table format: the order on the first line, then one
/// row per line. Blank lines and lines starting with `#` are skipped.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>, TableError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(TableError::Empty)?;
    let order: usize = header.parse().map_err(|_| TableError::Syntax {
        line,
        message: format!("expected the table order, found {header:?}"),
    })?;
    if order == 0 {
        return Err(TableError::Empty);
    }

    let mut rows = Vec::with_capacity(order);
    for (line, content) in lines {
        let row = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| TableError::Syntax {
                    line,
                    message: format!("not an integer: {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != order {
        return Err(TableError::Syntax {
            line: 0,
            message: format!("declared order {order} but found {} rows", rows.len()),
        });
    }
    check_shape(&rows)?;
    Ok(rows)
}

/// A finite doodle switch. Construction validates all axioms, so every value
/// of this type is a genuine switch.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteDoodleSwitch {
    order: usize,
    cells: Vec<u8>,
}

impl fmt::Debug for FiniteDoodleSwitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteDoodleSwitch")
            .field("rows", &self.rows())
            .finish()
    }
}

impl FiniteDoodleSwitch {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, SwitchError> {
        match verify_axioms(&rows)? {
            AxiomReport::Valid => Ok(Self::from_rows_unchecked(&rows)),
            AxiomReport::Invalid(v) => Err(SwitchError::Axiom(v)),
        }
    }

    pub fn from_text(text: &str) -> Result<Self, SwitchError> {
        Self::new(parse_table(text)?)
    }

    fn from_rows_unchecked(rows: &[Vec<usize>]) -> Self {
        let order = rows.len();
        let cells = rows.iter().flatten().map(|&v| (v - 1) as u8).collect();
        FiniteDoodleSwitch { order, cells }
    }

    /// `x · y = x`, valid for every order.
    pub fn projection(order: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&order));
        let cells = (0..order).flat_map(|a| std::iter::repeat_n(a as u8, order)).collect();
        FiniteDoodleSwitch { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `a · b` for 1-based elements.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul0(a - 1, b - 1) + 1
    }

    #[inline]
    pub(crate) fn mul0(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.order + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.order)
            .map(|row| row.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// `S(a, b) = (b · a, a · b)`.
    pub fn s_map(&self, a: usize, b: usize) -> (usize, usize) {
        (self.mul(b, a), self.mul(a, b))
    }

    /// Elements `c` with `c · c = c`; exactly the constant colorings.
    pub fn idempotents(&self) -> Vec<usize> {
        (1..=self.order).filter(|&c| self.mul(c, c) == c).collect()
    }

    pub fn derived_ops(&self) -> DerivedOps {
        DerivedOps::new(self)
    }

    /// First triple `(a, b, c)` in lexicographic order breaking
    /// `(a·b)·(c·b) = (a·c)·(b·c)`.
    pub fn r3_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.mul0(self.mul0(a, b), self.mul0(c, b));
                    let rhs = self.mul0(self.mul0(a, c), self.mul0(b, c));
                    if lhs != rhs {
                        return Some((a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        None
    }

    pub fn is_r3_compatible(&self) -> bool {
        self.r3_violation().is_none()
    }

    /// Image of this switch under the relabeling `x ↦ perm[x-1]` (1-based).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order;
        assert_eq!(perm.len(), n);
        let mut cells = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let (pa, pb) = (perm[a] - 1, perm[b] - 1);
                cells[pa * n + pb] = (perm[self.mul0(a, b)] - 1) as u8;
            }
        }
        FiniteDoodleSwitch { order: n, cells }
    }

    /// Lexicographically smallest table in the isomorphism class.
    pub fn canonical(&self) -> Self {
        let mut best = self.clone();
        for perm in permutations(self.order) {
            let candidate = self.relabel(&perm);
            if candidate.cells < best.cells {
                best = candidate;
            }
        }
        best
    }
}

impl fmt::Display for FiniteDoodleSwitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// The secondary operations every switch carries: right division `·⁻¹`, the
/// operation `•` read off `S⁻¹`, its right division `•⁻¹`, and the unary
/// `t(x) = x · x` with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedOps {
    order: usize,
    dot_inv: Vec<u8>,
    bullet: Vec<u8>,
    bullet_inv: Vec<u8>,
    t: Vec<u8>,
    t_inv: Vec<u8>,
}

impl DerivedOps {
    fn new(sw: &FiniteDoodleSwitch) -> Self {
        let n = sw.order;
        let mut dot_inv = vec![0u8; n * n];
        for y in 0..n {
            for u in 0..n {
                dot_inv[sw.mul0(u, y) * n + y] = u as u8;
            }
        }
        // S(a, b) = (c, d)  <=>  (a, b) = (d • c, c • d)
        let mut bullet = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let (c, d) = (sw.mul0(b, a), sw.mul0(a, b));
                bullet[c * n + d] = b as u8;
            }
        }
        let mut bullet_inv = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                bullet_inv[x * n + y] = sw.mul0(x, dot_inv[y * n + x] as usize) as u8;
            }
        }
        let t: Vec<u8> = (0..n).map(|x| sw.mul0(x, x) as u8).collect();
        let mut t_inv = vec![0u8; n];
        for (x, &tx) in t.iter().enumerate() {
            t_inv[tx as usize] = x as u8;
        }
        DerivedOps {
            order: n,
            dot_inv,
            bullet,
            bullet_inv,
            t,
            t_inv,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The unique `u` with `u · y = x`.
    pub fn dot_inv(&self, x: usize, y: usize) -> usize {
        self.dot_inv[(x - 1) * self.order + y - 1] as usize + 1
    }

    pub fn bullet(&self, x: usize, y: usize) -> usize {
        self.bullet[(x - 1) * self.order + y - 1] as usize + 1
    }

    pub fn bullet_inv(&self, x: usize, y: usize) -> usize {
        self.bullet_inv[(x - 1) * self.order + y - 1] as usize + 1
    }

    pub fn t(&self, x: usize) -> usize {
        self.t[x - 1] as usize + 1
    }

    pub fn t_inv(&self, x: usize) -> usize {
        self.t_inv[x - 1] as usize + 1
    }

    /// `S⁻¹(x, y) = (y • x, x • y)`.
    pub fn s_inv(&self, x: usize, y: usize) -> (usize, usize) {
        (self.bullet(y, x), self.bullet(x, y))
    }

    /// Exhaustively checks the identities tying these operations to `sw`.
    /// Returns the first failing identity and the pair it failed on.
    pub fn check_identities(&self, sw: &FiniteDoodleSwitch) -> Result<(), (&'static str, usize, usize)> {
        let n = sw.order();
        for x in 1..=n {
            if self.t_inv(x) != self.bullet(x, x) || self.t_inv(self.t(x)) != x {
                return Err(("t^-1(x) = x • x", x, x));
            }
            for y in 1..=n {
                let (a, b) = self.s_inv(x, y);
                let checks: [(&'static str, bool); 6] = [
                    ("S(S^-1(x,y)) = (x,y)", sw.s_map(a, b) == (x, y)),
                    ("S^-1(S(x,y)) = (x,y)", {
                        let (c, d) = sw.s_map(x, y);
                        self.s_inv(c, d) == (x, y)
                    }),
                    ("(x · y) ·^-1 y = x", self.dot_inv(sw.mul(x, y), y) == x),
                    ("(x ·^-1 y) · y = x", sw.mul(self.dot_inv(x, y), y) == x),
                    ("(x • y) •^-1 y = x", self.bullet_inv(self.bullet(x, y), y) == x),
                    ("(x •^-1 y) • y = x", self.bullet(self.bullet_inv(x, y), y) == x),
                ];
                if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
                    return Err((name, x, y));
                }
            }
        }
        Ok(())
    }
}

/// Searches for a bijection `φ` with `φ(x · y) = φ(x) ·' φ(y)`. The result is
/// 1-based: `phi[x - 1] = φ(x)`.
pub fn are_isomorphic(a: &FiniteDoodleSwitch, b: &FiniteDoodleSwitch) -> Option<Vec<usize>> {
    if a.order != b.order {
        return None;
    }
    let n = a.order;
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend_iso(a, b, 0, &mut phi, &mut used) {
        Some(phi.iter().map(|&v| v + 1).collect())
    } else {
        None
    }
}

fn extend_iso(
    a: &FiniteDoodleSwitch,
    b: &FiniteDoodleSwitch,
    next: usize,
    phi: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = a.order;
    if next == n {
        return true;
    }
    for target in 0..n {
        if used[target] {
            continue;
        }
        phi[next] = target;
        used[target] = true;
        if iso_consistent(a, b, next, phi, used) && extend_iso(a, b, next + 1, phi, used) {
            return true;
        }
        used[target] = false;
    }
    phi[next] = usize::MAX;
    false
}

/// Checks every product involving the newly mapped element `x` against the
/// elements mapped so far.
fn iso_consistent(a: &FiniteDoodleSwitch, b: &FiniteDoodleSwitch, x: usize, phi: &[usize], used: &[bool]) -> bool {
    for y in 0..=x {
        for (p, q) in [(x, y), (y, x)] {
            let image = b.mul0(phi[p], phi[q]);
            let prod = a.mul0(p, q);
            if prod <= x {
                if phi[prod] != image {
                    return false;
                }
            } else if used[image] {
                // the image is already taken by a mapped element other than prod
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("switch order must be at least 1")]
    ZeroOrder,
    #[error("order {0} is beyond the enumeration limit of 8")]
    TooLarge(usize),
}

/// Every switch of order `n`, sorted by row-major table. With `up_to_iso` only
/// the lexicographically smallest member of each isomorphism class is kept.
pub fn enumerate_switches(n: usize, up_to_iso: bool) -> Result<Vec<FiniteDoodleSwitch>, EnumerateError> {
    if n == 0 {
        return Err(EnumerateError::ZeroOrder);
    }
    if n > 8 {
        return Err(EnumerateError::TooLarge(n));
    }
    let mut search = SwitchSearch {
        n,
        cells: vec![u8::MAX; n * n],
        column_used: vec![false; n * n],
        image_used: vec![false; n * n],
        found: Vec::new(),
    };
    search.fill(0);
    let mut found: Vec<FiniteDoodleSwitch> = search
        .found
        .into_iter()
        .map(|cells| FiniteDoodleSwitch { order: n, cells })
        .collect();
    found.sort();
    if up_to_iso {
        found.retain(|sw| sw.canonical() == *sw);
    }
    Ok(found)
}

/// Column-major backtracking over partial tables.
struct SwitchSearch {
    n: usize,
    cells: Vec<u8>,
    /// column_used[col * n + value]
    column_used: Vec<bool>,
    /// image_used[c * n + d] for images (c, d) of S
    image_used: Vec<bool>,
    found: Vec<Vec<u8>>,
}

impl SwitchSearch {
    fn fill(&mut self, pos: usize) {
        let n = self.n;
        if pos == n * n {
            self.found.push(self.cells.clone());
            return;
        }
        let (col, row) = (pos / n, pos % n);
        // the mirror cell (col, row) lives in column `row`, already filled iff row < col
        let mirror = (row < col).then(|| self.cells[col * n + row] as usize);
        for v in 0..n {
            if self.column_used[col * n + v] || mirror == Some(v) {
                continue;
            }
            // images S(row, col) = (mirror, v) and S(col, row) = (v, mirror)
            let images = match mirror {
                _ if row == col => vec![v * n + v],
                Some(m) => vec![m * n + v, v * n + m],
                None => vec![],
            };
            if images.iter().any(|&im| self.image_used[im]) {
                continue;
            }
            for &im in &images {
                self.image_used[im] = true;
            }
            self.column_used[col * n + v] = true;
            self.cells[row * n + col] = v as u8;
            self.fill(pos + 1);
            self.cells[row * n + col] = u8::MAX;
            self.column_used[col * n + v] = false;
            for &im in &images {
                self.image_used[im] = false;
            }
        }
    }
}
