//! Effective sets, minor solves, and the majority-vote decoder.
//!
//! An effective set picks d + 1 distinct lines of a configuration and marks
//! ν points on the ν-th of them, δ = (d+2)(d+1)/2 points in total. The
//! corresponding δ×δ minor of the generator matrix is always regular, so
//! each effective set proposes one coefficient vector for a received word;
//! the decoder tallies those proposals and returns the majority, if any.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::binomial;
use crate::code::{CodeInstance, Codeword, CoefficientVector};
use crate::error::{Error, Result};
use crate::field::{back_substitute, eliminate_forward};
use crate::ENUMERATION_GUARD;

/// An error pattern is an arbitrary vector of nm field elements; its
/// support and weight are exposed by [`Codeword`] itself.
pub type ErrorVector = Codeword;

/// One entry of an effective set: a line index together with the marked
/// point columns on that line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineAssignment {
    pub line: usize,
    pub columns: Vec<usize>,
}

impl LineAssignment {
    pub fn new(line: usize, columns: Vec<usize>) -> Self {
        LineAssignment { line, columns }
    }
}

/// A choice of d + 1 distinct lines where the ν-th carries exactly ν marked
/// points, δ points in total. Canonical form: entries sorted by multiplicity
/// ascending, columns within an entry sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EffectiveSet {
    n: usize,
    m: usize,
    assignments: Vec<LineAssignment>,
}

impl EffectiveSet {
    /// Validates and canonicalizes: entries may arrive in any order, but
    /// their sizes must be exactly {1, 2, …, d+1}, lines must be distinct
    /// in [0, n), and each entry's columns distinct in [0, m).
    pub fn new(n: usize, m: usize, mut assignments: Vec<LineAssignment>) -> Result<Self> {
        if assignments.len() < 2 {
            return Err(Error::Parameter(format!(
                "an effective set needs at least 2 lines (d ≥ 1), found {}",
                assignments.len()
            )));
        }
        for entry in &mut assignments {
            entry.columns.sort_unstable();
            let before = entry.columns.len();
            entry.columns.dedup();
            if entry.columns.len() != before {
                return Err(Error::Parameter(format!(
                    "duplicate point column on line {}",
                    entry.line
                )));
            }
            if entry.line >= n {
                return Err(Error::Parameter(format!(
                    "line index {} out of range for n = {n}",
                    entry.line
                )));
            }
            if let Some(&c) = entry.columns.last() {
                if c >= m {
                    return Err(Error::Parameter(format!(
                        "point column {c} out of range for m = {m}"
                    )));
                }
            }
        }
        assignments.sort_unstable_by_key(|entry| entry.columns.len());
        for (k, entry) in assignments.iter().enumerate() {
            if entry.columns.len() != k + 1 {
                return Err(Error::Parameter(format!(
                    "multiplicities must be exactly 1..=d+1; entry {k} holds {} points",
                    entry.columns.len()
                )));
            }
        }
        let mut lines: Vec<usize> = assignments.iter().map(|e| e.line).collect();
        lines.sort_unstable();
        lines.dedup();
        if lines.len() != assignments.len() {
            return Err(Error::Parameter("line indices must be mutually distinct".into()));
        }
        Ok(EffectiveSet { n, m, assignments })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The degree d: one less than the number of lines used.
    pub fn degree(&self) -> usize {
        self.assignments.len() - 1
    }

    /// δ = 1 + 2 + … + (d+1).
    pub fn total_points(&self) -> usize {
        self.assignments.iter().map(|e| e.columns.len()).sum()
    }

    /// Entries in canonical order (multiplicity ascending).
    pub fn assignments(&self) -> &[LineAssignment] {
        &self.assignments
    }

    /// Global row indices line·m + column in canonical order.
    pub fn global_rows(&self) -> Vec<usize> {
        let mut rows = Vec::with_capacity(self.total_points());
        for entry in &self.assignments {
            for &c in &entry.columns {
                rows.push(entry.line * self.m + c);
            }
        }
        rows
    }

    /// The marked points as a set of global row indices.
    pub fn row_set(&self) -> BTreeSet<usize> {
        self.global_rows().into_iter().collect()
    }
}

impl fmt::Display for EffectiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, entry) in self.assignments.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "L{}[", entry.line)?;
            for (i, c) in entry.columns.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "}}")
    }
}

fn check_shape_params(n: usize, m: usize, d: usize) -> Result<()> {
    if d < 1 || d >= n.min(m) {
        return Err(Error::Parameter(format!(
            "degree d = {d} must satisfy 1 ≤ d < min(n, m) = {}",
            n.min(m)
        )));
    }
    Ok(())
}

/// |E_{n,m,d}| = ∏_{i=0}^{d} (n−i)·C(m, d+1−i): the line carrying
/// multiplicity d+1−i is chosen among the lines not yet used, then its
/// point subset freely. Saturates at u128::MAX, far beyond any guard.
pub fn count_effective_sets(n: usize, m: usize, d: usize) -> Result<u128> {
    check_shape_params(n, m, d)?;
    let mut count: u128 = 1;
    for i in 0..=d {
        let lines = (n - i) as u128;
        let subsets = binomial(m as u64, (d + 1 - i) as u64);
        count = count.saturating_mul(lines).saturating_mul(subsets);
    }
    Ok(count)
}

/// Next size-k combination of {0, …, m−1} in lexicographic order.
fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < m - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Next injective tuple over {0, …, n−1} in lexicographic order.
fn next_injective_tuple(tuple: &mut [usize], n: usize) -> bool {
    let k = tuple.len();
    let mut used = vec![false; n];
    for &v in tuple.iter() {
        used[v] = true;
    }
    let mut p = k;
    while p > 0 {
        p -= 1;
        used[tuple[p]] = false;
        let mut cand = tuple[p] + 1;
        while cand < n && used[cand] {
            cand += 1;
        }
        if cand < n {
            used[cand] = true;
            tuple[p] = cand;
            let mut free = 0;
            for slot in tuple.iter_mut().skip(p + 1) {
                while used[free] {
                    free += 1;
                }
                used[free] = true;
                *slot = free;
            }
            return true;
        }
    }
    false
}

/// Odometer over all effective sets without materializing them: the line
/// tuple (multiplicity 1 first) is most significant, then the column
/// combinations, the largest multiplicity's advancing fastest.
#[derive(Debug)]
struct RawSetIter {
    n: usize,
    m: usize,
    lines: Vec<usize>,
    columns: Vec<Vec<usize>>,
    done: bool,
}

impl RawSetIter {
    fn new(n: usize, m: usize, d: usize) -> Self {
        RawSetIter {
            n,
            m,
            lines: (0..=d).collect(),
            columns: (0..=d).map(|k| (0..=k).collect()).collect(),
            done: false,
        }
    }

    /// Appends the current set's global row indices in canonical order.
    fn write_rows(&self, rows: &mut Vec<usize>) {
        rows.clear();
        for (k, combo) in self.columns.iter().enumerate() {
            for &c in combo {
                rows.push(self.lines[k] * self.m + c);
            }
        }
    }

    fn current(&self) -> EffectiveSet {
        let assignments = self
            .lines
            .iter()
            .zip(&self.columns)
            .map(|(&line, combo)| LineAssignment::new(line, combo.clone()))
            .collect();
        EffectiveSet { n: self.n, m: self.m, assignments }
    }

    fn advance(&mut self) {
        let mut k = self.columns.len();
        while k > 0 {
            k -= 1;
            if next_combination(&mut self.columns[k], self.m) {
                return;
            }
            for (j, slot) in self.columns[k].iter_mut().enumerate() {
                *slot = j;
            }
        }
        if !next_injective_tuple(&mut self.lines, self.n) {
            self.done = true;
        }
    }
}

/// Iterator over every effective set for the shape (n, m, d), each exactly
/// once, in a fixed canonical order.
#[derive(Debug)]
pub struct EffectiveSetIter {
    raw: RawSetIter,
}

impl Iterator for EffectiveSetIter {
    type Item = EffectiveSet;

    fn next(&mut self) -> Option<EffectiveSet> {
        if self.raw.done {
            return None;
        }
        let set = self.raw.current();
        self.raw.advance();
        Some(set)
    }
}

/// Enumerates E_{n,m,d} when its cardinality fits under the enumeration
/// guard; larger families must be sampled instead.
pub fn enumerate_effective_sets(n: usize, m: usize, d: usize) -> Result<EffectiveSetIter> {
    let count = count_effective_sets(n, m, d)?;
    if count > ENUMERATION_GUARD {
        return Err(Error::TooLarge { size: count, guard: ENUMERATION_GUARD });
    }
    Ok(EffectiveSetIter { raw: RawSetIter::new(n, m, d) })
}

/// Draws one effective set uniformly at random: the line receiving each
/// multiplicity, largest first, is uniform among the unused lines, and its
/// column subset uniform among the (m choose ν) possibilities. This
/// factorization matches the counting product, hence uniformity.
pub fn sample_effective_set<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    d: usize,
    rng: &mut R,
) -> Result<EffectiveSet> {
    check_shape_params(n, m, d)?;
    let mut unused: Vec<usize> = (0..n).collect();
    let mut assignments = Vec::with_capacity(d + 1);
    for mult in (1..=d + 1).rev() {
        let pick = rng.random_range(0..unused.len());
        let line = unused.swap_remove(pick);
        let mut columns = rand::seq::index::sample(rng, m, mult).into_vec();
        columns.sort_unstable();
        assignments.push(LineAssignment::new(line, columns));
    }
    assignments.reverse();
    debug_assert!(assignments.iter().enumerate().all(|(k, e)| e.columns.len() == k + 1));
    Ok(EffectiveSet { n, m, assignments })
}

fn check_set_for_code(code: &CodeInstance, q: &EffectiveSet) -> Result<()> {
    let (n, m) = (code.config().n(), code.config().m());
    if q.n() != n || q.m() != m || q.degree() != code.d() {
        return Err(Error::Parameter(format!(
            "effective set for shape (n={}, m={}, d={}) used with a code of shape (n={n}, m={m}, d={})",
            q.n(),
            q.m(),
            q.degree(),
            code.d()
        )));
    }
    Ok(())
}

fn check_received(code: &CodeInstance, received: &Codeword) -> Result<Vec<u64>> {
    if received.len() != code.length() {
        return Err(Error::Shape(format!(
            "received word of length {} for a code of length {}",
            received.len(),
            code.length()
        )));
    }
    let spec = code.spec();
    let mut raw = Vec::with_capacity(received.len());
    for e in received.entries() {
        if e.spec() != spec {
            return Err(Error::SpecMismatch(spec.order(), e.spec().order()));
        }
        raw.push(e.value());
    }
    Ok(raw)
}

/// Solves the δ×δ system E_rows · a = rhs for one effective set. Scratch
/// buffers let the decoder's hot loop run allocation-free; the solution
/// lands in `rhs_buf`. A singular minor contradicts general position, so
/// it reports an internal inconsistency.
fn solve_rows(
    code: &CodeInstance,
    rows: &[usize],
    received_raw: &[u64],
    a_buf: &mut Vec<u64>,
    rhs_buf: &mut Vec<u64>,
) -> Result<()> {
    let delta = code.dimension();
    let matrix = code.matrix();
    a_buf.clear();
    rhs_buf.clear();
    for &r in rows {
        a_buf.extend_from_slice(matrix.row_raw(r));
        rhs_buf.push(received_raw[r]);
    }
    let (rank, _) =
        eliminate_forward(code.spec(), a_buf, delta, delta, Some((rhs_buf.as_mut_slice(), 1)));
    if rank != delta {
        return Err(Error::Internal(format!(
            "effective-set minor has rank {rank} < {delta}: configuration invariants are broken"
        )));
    }
    back_substitute(code.spec(), a_buf, delta, rhs_buf, 1);
    Ok(())
}

/// E_Q^{-1}·received_Q: the coefficient vector the effective set Q proposes
/// for the received word.
pub fn solve_minor(
    code: &CodeInstance,
    q: &EffectiveSet,
    received: &Codeword,
) -> Result<CoefficientVector> {
    check_set_for_code(code, q)?;
    let received_raw = check_received(code, received)?;
    let rows = q.global_rows();
    let mut a_buf = Vec::new();
    let mut rhs_buf = Vec::new();
    solve_rows(code, &rows, &received_raw, &mut a_buf, &mut rhs_buf)?;
    let spec = code.spec();
    let entries = rhs_buf
        .iter()
        .map(|&v| spec.element(v).expect("solution entries are reduced"))
        .collect();
    CoefficientVector::new(entries)
}

/// How the decoder walks the family of effective sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every effective set (requires the family under the enumeration guard).
    Exhaustive,
    /// K sets drawn uniformly with replacement; each draw's randomness is an
    /// independent stream of the one seed, so results do not depend on
    /// evaluation order.
    Sampled { k: u32, seed: u64 },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Exhaustive => write!(f, "exhaustive"),
            Strategy::Sampled { k, seed } => write!(f, "sampled(k={k}, seed={seed})"),
        }
    }
}

/// What the vote tally concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// A unique candidate reached the maximum multiplicity, which is ≥ 2.
    Decoded,
    /// Two or more candidates tie at maximum multiplicity ≥ 2.
    Ambiguous,
    /// Every examined set proposed a different candidate.
    Failed,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Decoded => write!(f, "decoded"),
            Outcome::Ambiguous => write!(f, "ambiguous"),
            Outcome::Failed => write!(f, "failed"),
        }
    }
}

/// The decoder's full account of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub outcome: Outcome,
    /// The winning coefficient vector when outcome = decoded.
    pub candidate: Option<CoefficientVector>,
    /// E·candidate, the corrected codeword, when outcome = decoded.
    pub corrected: Option<Codeword>,
    /// The maximum vote multiplicity.
    pub multiplicity: u64,
    /// Distinct candidates with their counts, sorted by count descending,
    /// ties by the candidate's canonical (entry-wise) order.
    pub votes: Vec<(CoefficientVector, u64)>,
    pub sets_examined: u64,
    pub strategy: Strategy,
}

/// Turns a raw tally into a sorted vote list and an outcome. Ties are
/// broken by the candidates' canonical order, never by arrival order.
fn classify(
    code: &CodeInstance,
    tally: HashMap<Vec<u64>, u64>,
    sets_examined: u64,
    strategy: Strategy,
) -> Result<DecodeReport> {
    let spec = code.spec();
    let mut votes: Vec<(CoefficientVector, u64)> = Vec::with_capacity(tally.len());
    for (raw, count) in tally {
        let entries = raw
            .iter()
            .map(|&v| spec.element(v).expect("solution entries are reduced"))
            .collect();
        votes.push((CoefficientVector::new(entries)?, count));
    }
    votes.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let multiplicity = votes.first().map_or(0, |v| v.1);
    let tied = votes.iter().take_while(|v| v.1 == multiplicity).count();
    let (outcome, candidate, corrected) = if multiplicity >= 2 && tied == 1 {
        let winner = votes[0].0.clone();
        let corrected = code.encode(&winner)?;
        (Outcome::Decoded, Some(winner), Some(corrected))
    } else if multiplicity >= 2 {
        (Outcome::Ambiguous, None, None)
    } else {
        (Outcome::Failed, None, None)
    };
    Ok(DecodeReport { outcome, candidate, corrected, multiplicity, votes, sets_examined, strategy })
}

/// Majority-vote decoding: solve the minor of every examined effective set,
/// tally the proposed coefficient vectors, and report the majority. The
/// tally is an order-independent merge, so the report never depends on the
/// order in which sets are examined.
pub fn decode(code: &CodeInstance, received: &Codeword, strategy: Strategy) -> Result<DecodeReport> {
    let received_raw = check_received(code, received)?;
    let (n, m, d) = (code.config().n(), code.config().m(), code.d());
    let mut tally: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut sets_examined = 0u64;
    let mut rows_buf = Vec::new();
    let mut a_buf = Vec::new();
    let mut rhs_buf = Vec::new();
    match strategy {
        Strategy::Exhaustive => {
            let count = count_effective_sets(n, m, d)?;
            if count > ENUMERATION_GUARD {
                return Err(Error::TooLarge { size: count, guard: ENUMERATION_GUARD });
            }
            let mut raw = RawSetIter::new(n, m, d);
            while !raw.done {
                raw.write_rows(&mut rows_buf);
                solve_rows(code, &rows_buf, &received_raw, &mut a_buf, &mut rhs_buf)?;
                match tally.get_mut(rhs_buf.as_slice()) {
                    Some(count) => *count += 1,
                    None => {
                        tally.insert(rhs_buf.clone(), 1);
                    }
                }
                sets_examined += 1;
                raw.advance();
            }
        }
        Strategy::Sampled { k, seed } => {
            if k < 2 {
                return Err(Error::Parameter(format!(
                    "sampled decoding needs k ≥ 2 sets, got {k}"
                )));
            }
            for i in 0..k {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let q = sample_effective_set(n, m, d, &mut rng)?;
                rows_buf.clear();
                rows_buf.extend(q.global_rows());
                solve_rows(code, &rows_buf, &received_raw, &mut a_buf, &mut rhs_buf)?;
                match tally.get_mut(rhs_buf.as_slice()) {
                    Some(count) => *count += 1,
                    None => {
                        tally.insert(rhs_buf.clone(), 1);
                    }
                }
                sets_examined += 1;
            }
        }
    }
    classify(code, tally, sets_examined, strategy)
}

/// The rank of the coincidence map of two effective sets, against the
/// symmetric-difference exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionRank {
    /// Rank of e ↦ E_Q^{-1}·e_Q − E_{Q'}^{-1}·e_{Q'} restricted to the
    /// coordinates Q ∪ Q'. For a uniform error the two solves coincide
    /// with probability exactly q^{−rank}.
    pub rank: usize,
    /// |Q ⊖ Q'|, the heuristic exponent suggested by the symmetric
    /// difference of the two point sets.
    pub heuristic_exponent: usize,
}

/// Measures how likely two distinct effective sets are to propose the same
/// wrong candidate: builds the difference of the two inverse minors as a
/// map on the coordinates Q ∪ Q' and returns its rank, alongside |Q ⊖ Q'|.
pub fn collision_rank(
    code: &CodeInstance,
    q1: &EffectiveSet,
    q2: &EffectiveSet,
) -> Result<CollisionRank> {
    check_set_for_code(code, q1)?;
    check_set_for_code(code, q2)?;
    if q1 == q2 {
        return Err(Error::Parameter(
            "collision rank needs two distinct effective sets".into(),
        ));
    }
    let rows1 = q1.global_rows();
    let rows2 = q2.global_rows();
    let inv1 = invert_minor(code, &rows1)?;
    let inv2 = invert_minor(code, &rows2)?;
    let set1 = q1.row_set();
    let set2 = q2.row_set();
    let union: Vec<usize> = set1.union(&set2).copied().collect();
    let position: HashMap<usize, usize> =
        union.iter().enumerate().map(|(j, &r)| (r, j)).collect();
    let delta = code.dimension();
    let mut map = crate::field::Matrix::zeros(code.spec(), delta, union.len())?;
    for (p, &r) in rows1.iter().enumerate() {
        let j = position[&r];
        for i in 0..delta {
            let v = map.get(i, j).add(inv1.get(i, p))?;
            map.set(i, j, v)?;
        }
    }
    for (p, &r) in rows2.iter().enumerate() {
        let j = position[&r];
        for i in 0..delta {
            let v = map.get(i, j).sub(inv2.get(i, p))?;
            map.set(i, j, v)?;
        }
    }
    let heuristic_exponent = set1.symmetric_difference(&set2).count();
    Ok(CollisionRank { rank: map.rank(), heuristic_exponent })
}

fn invert_minor(code: &CodeInstance, rows: &[usize]) -> Result<crate::field::Matrix> {
    code.matrix().submatrix_rows(rows)?.inverse().map_err(|e| match e {
        Error::SingularMatrix { rank, dim } => Error::Internal(format!(
            "effective-set minor has rank {rank} < {dim}: configuration invariants are broken"
        )),
        other => other,
    })
}
