//! Tableau combinatorics on the n×m index grid, the radius polynomial f,
//! extremal codewords of grid codes, the brute-force minimum-distance
//! oracle, and the rational-point count comparison.

use crate::code::{CodeInstance, CoefficientVector, Codeword};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::geometry::Line;
use crate::ENUMERATION_GUARD;

/// A downward-closed subset of the n×m index grid: whenever cell (i, j) is
/// present, so is every (k, l) with k ≤ i and l ≤ j. Cells are 1-based.
/// Stored as the weakly decreasing sequence of row lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    m: usize,
    row_lengths: Vec<usize>,
}

impl Tableau {
    /// Builds a tableau from its row-length profile, which must be weakly
    /// decreasing and fit the grid.
    pub fn new(n: usize, m: usize, row_lengths: Vec<usize>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Parameter("tableau grid dimensions must be positive".into()));
        }
        if row_lengths.len() != n {
            return Err(Error::Parameter(format!(
                "profile has {} rows for an n = {n} grid",
                row_lengths.len()
            )));
        }
        for (i, &len) in row_lengths.iter().enumerate() {
            if len > m {
                return Err(Error::Parameter(format!("row {} has length {len} > m = {m}", i + 1)));
            }
            if i > 0 && len > row_lengths[i - 1] {
                return Err(Error::Parameter(format!(
                    "row lengths must be weakly decreasing, row {} has {len} after {}",
                    i + 1,
                    row_lengths[i - 1]
                )));
            }
        }
        Ok(Tableau { n, m, row_lengths })
    }

    pub fn empty(n: usize, m: usize) -> Result<Self> {
        Tableau::new(n, m, vec![0; n])
    }

    /// Builds a tableau from an explicit 1-based cell set, rejecting sets
    /// that are not downward-closed.
    pub fn from_cells(n: usize, m: usize, cells: &[(usize, usize)]) -> Result<Self> {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in cells {
            if i < 1 || i > n || j < 1 || j > m {
                return Err(Error::Parameter(format!("cell ({i}, {j}) outside the {n}×{m} grid")));
            }
            rows[i - 1].push(j);
        }
        let mut row_lengths = Vec::with_capacity(n);
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            let before = row.len();
            row.dedup();
            if row.len() != before {
                return Err(Error::Parameter(format!("row {} has duplicate cells", i + 1)));
            }
            let len = row.len();
            let contiguous = row.iter().enumerate().all(|(k, &j)| j == k + 1);
            if !contiguous {
                return Err(Error::Parameter(format!(
                    "row {} is not left-justified, so the set is not downward-closed",
                    i + 1
                )));
            }
            row_lengths.push(len);
        }
        Tableau::new(n, m, row_lengths)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    /// The 1-based cells, row by row.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.sigma());
        for (i, &len) in self.row_lengths.iter().enumerate() {
            for j in 1..=len {
                out.push((i + 1, j));
            }
        }
        out
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.n && j >= 1 && self.row_lengths[i - 1] >= j
    }

    /// σ: the number of cells.
    pub fn sigma(&self) -> usize {
        self.row_lengths.iter().sum()
    }

    /// Whether the staircase R_size = {(i, j) : i + j ≤ size + 1} is a
    /// subset, i.e. cell (i, size + 1 − i) is present for i = 1,…,size.
    pub fn contains_regular(&self, size: usize) -> bool {
        if size == 0 {
            return true;
        }
        if size > self.n || size > self.m {
            return false;
        }
        (1..=size).all(|i| self.contains(i, size + 1 - i))
    }
}

/// The staircase R_l = {(i, j) : i + j ≤ l + 1} inside an n×m grid.
pub fn regular_tableau(n: usize, m: usize, l: usize) -> Result<Tableau> {
    if l > n || l > m {
        return Err(Error::Parameter(format!("R_{l} does not fit a {n}×{m} grid")));
    }
    let row_lengths = (0..n).map(|i| if i < l { l - i } else { 0 }).collect();
    Tableau::new(n, m, row_lengths)
}

/// T_{k,l}: the union of the first k full rows and first l full columns of
/// an n×m grid.
pub fn t_tableau(n: usize, m: usize, k: usize, l: usize) -> Result<Tableau> {
    if k > n || l > m {
        return Err(Error::Parameter(format!("T_{{{k},{l}}} does not fit a {n}×{m} grid")));
    }
    let row_lengths = (0..n).map(|i| if i < k { m } else { l }).collect();
    Tableau::new(n, m, row_lengths)
}

/// Every tableau of the n×m grid, enumerated as weakly decreasing
/// row-length profiles. There are C(n+m, n) of them.
pub fn enumerate_tableaux(n: usize, m: usize) -> Result<Vec<Tableau>> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter("tableau grid dimensions must be positive".into()));
    }
    let total = binomial((n + m) as u64, n as u64);
    if total > ENUMERATION_GUARD {
        return Err(Error::TooLarge { size: total, guard: ENUMERATION_GUARD });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut profile = vec![0usize; n];
    fill_profiles(n, m, 0, m, &mut profile, &mut out);
    Ok(out)
}

fn fill_profiles(
    n: usize,
    m: usize,
    row: usize,
    max_len: usize,
    profile: &mut Vec<usize>,
    out: &mut Vec<Tableau>,
) {
    if row == n {
        out.push(Tableau { n, m, row_lengths: profile.clone() });
        return;
    }
    for len in (0..=max_len).rev() {
        profile[row] = len;
        fill_profiles(n, m, row + 1, len, profile, out);
    }
}

/// Number of effective sets, for degree bound d, all of whose points lie in
/// the given 1-based cell set of the n×m grid: the d+1 multiplicities go to
/// distinct rows, the row carrying ν points contributing C(cells in row, ν)
/// choices.
pub fn count_effective_subsets(
    n: usize,
    m: usize,
    d: usize,
    cells: &[(usize, usize)],
) -> Result<u128> {
    if d < 1 {
        return Err(Error::Parameter(format!("degree d = {d} must be at least 1")));
    }
    let mut row_counts = vec![0usize; n];
    let mut seen = std::collections::HashSet::with_capacity(cells.len());
    for &(i, j) in cells {
        if i < 1 || i > n || j < 1 || j > m {
            return Err(Error::Parameter(format!("cell ({i}, {j}) outside the {n}×{m} grid")));
        }
        if !seen.insert((i, j)) {
            return Err(Error::Parameter(format!("cell ({i}, {j}) appears more than once")));
        }
        row_counts[i - 1] += 1;
    }
    // Work is bounded by the number of injective row assignments.
    let mut work: u128 = 1;
    for i in 0..=d {
        if i >= n {
            return Ok(0);
        }
        work = work.saturating_mul((n - i) as u128);
    }
    if work > ENUMERATION_GUARD {
        return Err(Error::TooLarge { size: work, guard: ENUMERATION_GUARD });
    }
    let mut used = vec![false; n];
    Ok(count_assignments(&row_counts, d + 1, &mut used))
}

fn count_assignments(row_counts: &[usize], mult: usize, used: &mut [bool]) -> u128 {
    if mult == 0 {
        return 1;
    }
    let mut total = 0u128;
    for r in 0..row_counts.len() {
        if used[r] || row_counts[r] < mult {
            continue;
        }
        used[r] = true;
        let ways = binomial(row_counts[r] as u64, mult as u64);
        total += ways * count_assignments(row_counts, mult - 1, used);
        used[r] = false;
    }
    total
}

/// Exact binomial coefficient C(n, k).
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The quadratic f(x) = x² + (m−n−d−2)x + (n+1)(d+1) − m whose maximum over
/// k = 1,…,d+1 bounds the cell count of tableaux without the R_{d+1}
/// staircase. Satisfies f(1) = nd and f(d+1) = md identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadiusPolynomial {
    n: usize,
    m: usize,
    d: usize,
}

impl RadiusPolynomial {
    pub fn new(n: usize, m: usize, d: usize) -> Self {
        let p = RadiusPolynomial { n, m, d };
        debug_assert_eq!(p.eval(1), (n * d) as i128);
        debug_assert_eq!(p.eval(d as u64 + 1), (m * d) as i128);
        p
    }

    pub fn eval(&self, k: u64) -> i128 {
        let (n, m, d, k) = (self.n as i128, self.m as i128, self.d as i128, k as i128);
        k * k + (m - n - d - 2) * k + (n + 1) * (d + 1) - m
    }

    /// The maximum of f over k ∈ {1,…,d+1} and the smallest maximizing k.
    pub fn max_over_range(&self) -> (i128, usize) {
        let mut best = (self.eval(1), 1usize);
        for k in 2..=self.d + 1 {
            let v = self.eval(k as u64);
            if v > best.0 {
                best = (v, k);
            }
        }
        best
    }
}

/// The tableau-derived decoding/distance bound for an (n, m, d) code shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorRadius {
    /// Max{f(k) : 1 ≤ k ≤ d+1}.
    pub max_f: u64,
    /// The smallest maximizing k.
    pub argmax_k: usize,
    /// nm − max_f, the distance lower bound and heuristic decoding radius.
    pub radius: u64,
}

/// Evaluates f at every k in [1, d+1] and returns the maximum, the
/// maximizing k, and the radius nm − max_f. Requires the tableau analysis
/// hypothesis that n or m reaches d + 2.
pub fn error_radius(n: usize, m: usize, d: usize) -> Result<ErrorRadius> {
    if d < 1 || d >= n.min(m) {
        return Err(Error::Parameter(format!(
            "degree d = {d} must satisfy 1 ≤ d < min(n, m) = {}",
            n.min(m)
        )));
    }
    if m < d + 2 && n < d + 2 {
        return Err(Error::Parameter(format!(
            "radius analysis needs n ≥ d+2 or m ≥ d+2; got n = {n}, m = {m}, d+2 = {}",
            d + 2
        )));
    }
    let (max_f, argmax_k) = RadiusPolynomial::new(n, m, d).max_over_range();
    let max_f = u64::try_from(max_f)
        .map_err(|_| Error::Internal(format!("max f(k) = {max_f} is negative")))?;
    let radius = (n * m) as u64 - max_f;
    Ok(ErrorRadius { max_f, argmax_k, radius })
}

/// The coefficient vector of p = l_1 ⋯ l_{k0−1} · m_1 ⋯ m_{d+1−k0}, the
/// degree-d product of leading row and column lines of a grid code, where
/// k0 is the maximizing k of the radius polynomial.
pub fn extremal_polynomial(code: &CodeInstance) -> Result<CoefficientVector> {
    let config = code.config();
    let Some(grid) = config.grid_lines() else {
        return Err(Error::Unsupported(
            "extremal codeword needs a grid-built code (grid lines present)".into(),
        ));
    };
    let (n, m, d) = (config.n(), config.m(), code.d());
    let k0 = error_radius(n, m, d)?.argmax_k;
    let mut factors: Vec<&Line> = Vec::with_capacity(d);
    factors.extend(config.lines()[..k0 - 1].iter());
    factors.extend(grid[..d + 1 - k0].iter());
    debug_assert_eq!(factors.len(), d);
    let spec = config.spec();

    // Dense (d+1)×(d+1) coefficient table, entry (i, j) for x^i y^j.
    let mut coeffs = vec![vec![0u64; d + 1]; d + 1];
    coeffs[0][0] = 1;
    for (step, line) in factors.iter().enumerate() {
        let mut next = vec![vec![0u64; d + 1]; d + 1];
        let (a, b, c) = (line.a().value(), line.b().value(), line.c().value());
        for i in 0..=step {
            for j in 0..=step - i {
                let v = coeffs[i][j];
                if v == 0 {
                    continue;
                }
                next[i + 1][j] = spec.add_raw(next[i + 1][j], spec.mul_raw(a, v));
                next[i][j + 1] = spec.add_raw(next[i][j + 1], spec.mul_raw(b, v));
                next[i][j] = spec.add_raw(next[i][j], spec.mul_raw(c, v));
            }
        }
        coeffs = next;
    }

    let basis = code.basis();
    let mut out = vec![spec.zero(); basis.dimension()];
    for (i, row) in coeffs.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                let idx = basis
                    .index_of(i, j)
                    .ok_or_else(|| Error::Internal(format!("monomial x^{i} y^{j} beyond degree {d}")))?;
                out[idx] = spec.element(v)?;
            }
        }
    }
    CoefficientVector::new(out)
}

/// Encodes the extremal polynomial. Its weight is nm − Max{f(k)} and its
/// zero set is the tableau T_{k0−1, d+1−k0} under the (i, j) identification.
pub fn extremal_codeword(code: &CodeInstance) -> Result<Codeword> {
    code.encode(&extremal_polynomial(code)?)
}

/// Minimum Hamming weight over all q^δ − 1 nonzero messages, by streamed
/// encoding. Independent of every closed-form bound in this module.
pub fn min_distance_bruteforce(code: &CodeInstance) -> Result<u64> {
    let spec = code.spec();
    let q = spec.order();
    let delta = code.dimension();
    let mut space: u128 = 1;
    for _ in 0..delta {
        space = space.saturating_mul(q as u128);
        if space > ENUMERATION_GUARD {
            return Err(Error::TooLarge { size: space, guard: ENUMERATION_GUARD });
        }
    }
    let matrix = code.matrix();
    let mut message = vec![0u64; delta];
    let mut word = vec![0u64; code.length()];
    let mut min_weight = u64::MAX;
    'outer: loop {
        // Advance the base-q odometer; the all-zero message is skipped.
        let mut pos = 0;
        loop {
            if pos == delta {
                break 'outer;
            }
            message[pos] += 1;
            if message[pos] < q {
                break;
            }
            message[pos] = 0;
            pos += 1;
        }
        matrix.mul_vec_raw(&message, &mut word);
        let weight = word.iter().filter(|&&v| v != 0).count() as u64;
        if weight < min_weight {
            min_weight = weight;
        }
    }
    Ok(min_weight)
}

/// The §-agnostic point-count comparison: rational points covered by n
/// lines in general position versus the classical curve bound for the same
/// degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCountComparison {
    /// nq − n(n−1)/2: each pairwise intersection is shared by two lines.
    pub config_points: u64,
    /// 1 + q + (n−1)(n−2)·√q, the genus-based ceiling for a smooth plane
    /// curve of degree n.
    pub weil_bound: f64,
}

pub fn point_count_comparison(q: u64, n: u64) -> Result<PointCountComparison> {
    FieldSpec::new(q)?;
    if n < 1 {
        return Err(Error::Parameter("need at least one line".into()));
    }
    let config_points = n * q - n * (n - 1) / 2;
    let twice_genus = if n >= 2 { (n - 1) * (n - 2) } else { 0 };
    let weil_bound = 1.0 + q as f64 + twice_genus as f64 * (q as f64).sqrt();
    Ok(PointCountComparison { config_points, weil_bound })
}
