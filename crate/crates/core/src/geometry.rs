//! Affine lines over F_q, general-position certificates, intersections, and
//! the point families (random and grid) that evaluation codes are built on.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Attempt budget for rejection sampling of general-position families.
pub const GENERATION_BUDGET: u32 = 10_000;

/// A point of the affine plane over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    x: FieldElement,
    y: FieldElement,
}

impl Point {
    pub fn new(x: FieldElement, y: FieldElement) -> Result<Self> {
        if x.spec() != y.spec() {
            return Err(Error::SpecMismatch(x.spec().order(), y.spec().order()));
        }
        Ok(Point { x, y })
    }

    pub fn x(&self) -> FieldElement {
        self.x
    }

    pub fn y(&self) -> FieldElement {
        self.y
    }

    pub fn spec(&self) -> FieldSpec {
        self.x.spec()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The affine line ax + by + c = 0; the coefficient pair (a, b) is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
}

impl Line {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement) -> Result<Self> {
        if a.spec() != b.spec() || a.spec() != c.spec() {
            return Err(Error::SpecMismatch(a.spec().order(), b.spec().order().max(c.spec().order())));
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateLine);
        }
        Ok(Line { a, b, c })
    }

    /// Builds a line from canonical residues.
    pub fn from_raw(spec: FieldSpec, a: u64, b: u64, c: u64) -> Result<Self> {
        Line::new(spec.element(a)?, spec.element(b)?, spec.element(c)?)
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    pub fn b(&self) -> FieldElement {
        self.b
    }

    pub fn c(&self) -> FieldElement {
        self.c
    }

    pub fn spec(&self) -> FieldSpec {
        self.a.spec()
    }

    /// Evaluates the linear form ax + by + c at a point.
    pub fn eval(&self, p: &Point) -> Result<FieldElement> {
        if p.spec() != self.spec() {
            return Err(Error::SpecMismatch(self.spec().order(), p.spec().order()));
        }
        let spec = self.spec();
        let mut acc = spec.mul_raw(self.a.value(), p.x.value());
        acc = spec.add_raw(acc, spec.mul_raw(self.b.value(), p.y.value()));
        acc = spec.add_raw(acc, self.c.value());
        spec.element(acc)
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(self.eval(p)?.is_zero())
    }

    /// The t-th point of the line under the canonical parametrization: the
    /// direction vector is (b, -a) scaled so its first nonzero coordinate
    /// is 1, and the base point is the one with parameter 0.
    pub fn point_at(&self, t: u64) -> Result<Point> {
        let spec = self.spec();
        let t = spec.element(t)?;
        if !self.b.is_zero() {
            // x is free: (t, -(c + a t) / b).
            let y = self.c.add(self.a.mul(t)?)?.neg().div(self.b)?;
            Point::new(t, y)
        } else {
            // Vertical line x = -c / a.
            let x = self.c.neg().div(self.a)?;
            Point::new(x, t)
        }
    }

    /// All q rational points of the line, in parameter order t = 0,…,q-1.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.spec().order()).map(move |t| {
            self.point_at(t).expect("parameter below q is canonical")
        })
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y + {} = 0", self.a, self.b, self.c)
    }
}

/// The unique common point of two non-parallel lines, by Cramer's rule.
pub fn intersection(l1: &Line, l2: &Line) -> Result<Point> {
    if l1.spec() != l2.spec() {
        return Err(Error::SpecMismatch(l1.spec().order(), l2.spec().order()));
    }
    let spec = l1.spec();
    let det = spec.sub_raw(
        spec.mul_raw(l1.a.value(), l2.b.value()),
        spec.mul_raw(l2.a.value(), l1.b.value()),
    );
    if det == 0 {
        return Err(Error::NoIntersection);
    }
    let det_inv = spec.inv_raw(det);
    let x_num = spec.sub_raw(
        spec.mul_raw(l1.b.value(), l2.c.value()),
        spec.mul_raw(l2.b.value(), l1.c.value()),
    );
    let y_num = spec.sub_raw(
        spec.mul_raw(l2.a.value(), l1.c.value()),
        spec.mul_raw(l1.a.value(), l2.c.value()),
    );
    Point::new(
        spec.element(spec.mul_raw(x_num, det_inv))?,
        spec.element(spec.mul_raw(y_num, det_inv))?,
    )
}

/// Evidence that a family of lines is not in general position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionDefect {
    /// The two lines (by index) are parallel or equal.
    Pair(usize, usize),
    /// The three lines (by index) pass through a common point.
    Triple(usize, usize, usize),
}

impl fmt::Display for PositionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositionDefect::Pair(i, j) => write!(f, "lines {i} and {j} are parallel or equal"),
            PositionDefect::Triple(i, j, k) => write!(f, "lines {i}, {j}, {k} are concurrent"),
        }
    }
}

/// Checks general position and, when it fails, names the first offending
/// pair (parallel/equal lines) or triple (concurrent lines).
pub fn general_position_witness(lines: &[Line]) -> Result<Option<PositionDefect>> {
    if lines.len() < 2 {
        return Err(Error::Parameter("general position needs at least two lines".into()));
    }
    let spec = lines[0].spec();
    for l in lines {
        if l.spec() != spec {
            return Err(Error::SpecMismatch(spec.order(), l.spec().order()));
        }
    }
    let n = lines.len();
    for i in 0..n {
        for j in i + 1..n {
            let det = spec.sub_raw(
                spec.mul_raw(lines[i].a.value(), lines[j].b.value()),
                spec.mul_raw(lines[j].a.value(), lines[i].b.value()),
            );
            if det == 0 {
                return Ok(Some(PositionDefect::Pair(i, j)));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(spec, &lines[i], &lines[j], &lines[k]) == 0 {
                    return Ok(Some(PositionDefect::Triple(i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_general_position(lines: &[Line]) -> Result<bool> {
    Ok(general_position_witness(lines)?.is_none())
}

/// Determinant of the 3x3 coefficient matrix of three lines.
fn det3(spec: FieldSpec, l1: &Line, l2: &Line, l3: &Line) -> u64 {
    let m2 = |a: u64, b: u64, c: u64, d: u64| spec.sub_raw(spec.mul_raw(a, d), spec.mul_raw(b, c));
    let (a1, b1, c1) = (l1.a.value(), l1.b.value(), l1.c.value());
    let (a2, b2, c2) = (l2.a.value(), l2.b.value(), l2.c.value());
    let (a3, b3, c3) = (l3.a.value(), l3.b.value(), l3.c.value());
    let t1 = spec.mul_raw(a1, m2(b2, c2, b3, c3));
    let t2 = spec.mul_raw(b1, m2(a2, c2, a3, c3));
    let t3 = spec.mul_raw(c1, m2(a2, b2, a3, b3));
    spec.add_raw(spec.sub_raw(t1, t2), t3)
}

/// n lines in general position, each carrying m marked rational points that
/// avoid every pairwise intersection. The configuration of the evaluation
/// code: point (i, j) is the j-th marked point of line i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    spec: FieldSpec,
    lines: Vec<Line>,
    points: Vec<Vec<Point>>,
    grid_lines: Option<Vec<Line>>,
    intersections: Vec<Point>,
}

impl Configuration {
    /// Builds a configuration from explicit lines and points, validating
    /// every invariant.
    pub fn new(lines: Vec<Line>, points: Vec<Vec<Point>>) -> Result<Self> {
        Configuration::from_parts(lines, points, None)
    }

    /// Builds a configuration from explicit parts. When `grid_lines` is
    /// present, additionally requires points[i][j] to be the intersection
    /// of lines[i] with grid_lines[j].
    pub fn from_parts(
        lines: Vec<Line>,
        points: Vec<Vec<Point>>,
        grid_lines: Option<Vec<Line>>,
    ) -> Result<Self> {
        let spec = lines
            .first()
            .ok_or_else(|| Error::InvalidConfiguration("no lines given".into()))?
            .spec();
        let mut config = Configuration { spec, lines, points, grid_lines, intersections: Vec::new() };
        config.intersections = config.compute_intersections()?;
        config.validate()?;
        Ok(config)
    }

    /// Grid construction from explicit line families: point (i, j) is the
    /// intersection of lines[i] with grid_lines[j].
    pub fn from_grid_lines(lines: Vec<Line>, grid_lines: Vec<Line>) -> Result<Self> {
        let mut points = Vec::with_capacity(lines.len());
        for line in &lines {
            let mut row = Vec::with_capacity(grid_lines.len());
            for grid in &grid_lines {
                row.push(intersection(line, grid)?);
            }
            points.push(row);
        }
        Configuration::from_parts(lines, points, Some(grid_lines))
    }

    /// Samples n lines in general position, then m distinct points per line
    /// avoiding every pairwise intersection. Deterministic in the seed.
    pub fn random(spec: FieldSpec, n: usize, m: usize, seed: u64) -> Result<Self> {
        let q = spec.order();
        check_family_shape(n, m)?;
        if n as u128 > q as u128 + 1 {
            return Err(Error::Parameter(format!(
                "n = {n} exceeds the {} available line directions over {spec}",
                q + 1
            )));
        }
        if m as u128 > q as u128 - (n as u128 - 1) {
            return Err(Error::Parameter(format!(
                "m = {m} exceeds the {} points per line left after avoiding intersections over {spec}",
                q - (n as u64 - 1)
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lines = sample_general_position(spec, n, &mut rng)?;
        let blocked: HashSet<Point> = pairwise_intersections(&lines)?.into_iter().collect();
        let mut points = Vec::with_capacity(n);
        for line in &lines {
            let available: Vec<Point> = line.points().filter(|p| !blocked.contains(p)).collect();
            let chosen = index::sample(&mut rng, available.len(), m);
            points.push(chosen.iter().map(|k| available[k]).collect());
        }
        Configuration::from_parts(lines, points, None)
    }

    /// Samples n + m lines jointly in general position and marks the grid
    /// of pairwise intersections: point (i, j) = L_i ∩ M_j.
    pub fn random_grid(spec: FieldSpec, n: usize, m: usize, seed: u64) -> Result<Self> {
        let q = spec.order();
        check_family_shape(n, m)?;
        if (n as u128 + m as u128) > q as u128 + 1 {
            return Err(Error::Parameter(format!(
                "n + m = {} exceeds the {} available line directions over {spec}",
                n + m,
                q + 1
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = sample_general_position(spec, n + m, &mut rng)?;
        let (lines, grid_lines) = all.split_at(n);
        Configuration::from_grid_lines(lines.to_vec(), grid_lines.to_vec())
    }

    /// Re-checks every configuration invariant. Constructors always run
    /// this; it is public so deserialized configurations can be audited.
    pub fn validate(&self) -> Result<()> {
        let n = self.lines.len();
        if n < 2 {
            return Err(Error::InvalidConfiguration(format!("need at least 2 lines, found {n}")));
        }
        for line in &self.lines {
            if line.spec() != self.spec {
                return Err(Error::SpecMismatch(self.spec.order(), line.spec().order()));
            }
        }
        if self.points.len() != n {
            return Err(Error::InvalidConfiguration(format!(
                "{} point rows for {n} lines",
                self.points.len()
            )));
        }
        let m = self.points[0].len();
        if m == 0 {
            return Err(Error::InvalidConfiguration("need at least 1 point per line".into()));
        }
        for (i, row) in self.points.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidConfiguration(format!(
                    "line {i} carries {} points, expected {m}",
                    row.len()
                )));
            }
            for p in row {
                if p.spec() != self.spec {
                    return Err(Error::SpecMismatch(self.spec.order(), p.spec().order()));
                }
            }
        }
        if let Some(defect) = general_position_witness(&self.lines)? {
            return Err(Error::InvalidConfiguration(format!("not in general position: {defect}")));
        }
        for (i, row) in self.points.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if !self.lines[i].contains(p)? {
                    return Err(Error::InvalidConfiguration(format!(
                        "point ({}, {}) = {p} does not lie on line {i}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let blocked: HashSet<Point> = self.intersections.iter().copied().collect();
        let mut seen: HashSet<Point> = HashSet::with_capacity(n * m);
        for (i, row) in self.points.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if blocked.contains(p) {
                    return Err(Error::InvalidConfiguration(format!(
                        "point ({}, {}) = {p} coincides with a pairwise intersection",
                        i + 1,
                        j + 1
                    )));
                }
                if !seen.insert(*p) {
                    return Err(Error::InvalidConfiguration(format!(
                        "point ({}, {}) = {p} appears more than once",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if let Some(grid) = &self.grid_lines {
            if grid.len() != m {
                return Err(Error::InvalidConfiguration(format!(
                    "{} grid lines for {m} point columns",
                    grid.len()
                )));
            }
            for (i, line) in self.lines.iter().enumerate() {
                for (j, g) in grid.iter().enumerate() {
                    if g.spec() != self.spec {
                        return Err(Error::SpecMismatch(self.spec.order(), g.spec().order()));
                    }
                    let expected = intersection(line, g)?;
                    if expected != self.points[i][j] {
                        return Err(Error::InvalidConfiguration(format!(
                            "point ({}, {}) is {} but the line grid meets at {expected}",
                            i + 1,
                            j + 1,
                            self.points[i][j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_intersections(&self) -> Result<Vec<Point>> {
        pairwise_intersections(&self.lines)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Number of lines n.
    pub fn n(&self) -> usize {
        self.lines.len()
    }

    /// Number of marked points per line m.
    pub fn m(&self) -> usize {
        self.points[0].len()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn points(&self) -> &[Vec<Point>] {
        &self.points
    }

    /// The marked point (i, j), zero-indexed.
    pub fn point(&self, i: usize, j: usize) -> Point {
        self.points[i][j]
    }

    pub fn grid_lines(&self) -> Option<&[Line]> {
        self.grid_lines.as_deref()
    }

    /// The pairwise intersections I_uv, in lexicographic pair order.
    pub fn intersection_points(&self) -> &[Point] {
        &self.intersections
    }
}

fn check_family_shape(n: usize, m: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Parameter(format!("need at least 2 lines, requested {n}")));
    }
    if m < 1 {
        return Err(Error::Parameter(format!("need at least 1 point per line, requested {m}")));
    }
    Ok(())
}

fn pairwise_intersections(lines: &[Line]) -> Result<Vec<Point>> {
    let mut out = Vec::with_capacity(lines.len() * (lines.len() - 1) / 2);
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            out.push(intersection(&lines[i], &lines[j])?);
        }
    }
    Ok(out)
}

/// One uniformly random line, as the canonical representative whose first
/// nonzero coefficient among (a, b) is 1.
fn random_line(spec: FieldSpec, rng: &mut ChaCha8Rng) -> Line {
    let q = spec.order();
    loop {
        let a = rng.random_range(0..q);
        let b = rng.random_range(0..q);
        if a == 0 && b == 0 {
            continue;
        }
        let c = rng.random_range(0..q);
        let scale = if a != 0 { spec.inv_raw(a) } else { spec.inv_raw(b) };
        return Line::from_raw(
            spec,
            spec.mul_raw(a, scale),
            spec.mul_raw(b, scale),
            spec.mul_raw(c, scale),
        )
        .expect("scaled coefficients stay canonical and nonzero");
    }
}

/// Rejection-samples a family of `count` lines in general position.
fn sample_general_position(spec: FieldSpec, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Line>> {
    for _ in 0..GENERATION_BUDGET {
        let lines: Vec<Line> = (0..count).map(|_| random_line(spec, rng)).collect();
        if general_position_witness(&lines)?.is_none() {
            return Ok(lines);
        }
    }
    Err(Error::GenerationFailure(GENERATION_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn line(spec: FieldSpec, a: u64, b: u64, c: u64) -> Line {
        Line::from_raw(spec, a, b, c).unwrap()
    }

    #[test]
    fn degenerate_lines_are_rejected() {
        let f7 = f(7);
        assert!(matches!(Line::from_raw(f7, 0, 0, 3), Err(Error::DegenerateLine)));
        assert!(Line::from_raw(f7, 0, 1, 3).is_ok());
    }

    #[test]
    fn general_position_examples() {
        let f7 = f(7);
        let x = line(f7, 1, 0, 0);
        let y = line(f7, 0, 1, 0);
        let xy1 = line(f7, 1, 1, 1);
        let xy = line(f7, 1, 1, 0);
        let x1 = line(f7, 1, 0, 1);

        assert!(is_general_position(&[x, y, xy1]).unwrap());
        assert_eq!(
            general_position_witness(&[x, y, xy]).unwrap(),
            Some(PositionDefect::Triple(0, 1, 2))
        );
        assert_eq!(
            general_position_witness(&[x, x1]).unwrap(),
            Some(PositionDefect::Pair(0, 1))
        );
    }

    #[test]
    fn general_position_needs_two_lines() {
        let f7 = f(7);
        let x = line(f7, 1, 0, 0);
        assert!(matches!(general_position_witness(&[x]), Err(Error::Parameter(_))));
        assert!(matches!(general_position_witness(&[]), Err(Error::Parameter(_))));
    }

    #[test]
    fn general_position_is_order_invariant() {
        use rand::SeedableRng;
        let f11 = f(11);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let lines: Vec<Line> = (0..4).map(|_| random_line(f11, &mut rng)).collect();
            let verdict = is_general_position(&lines).unwrap();
            let mut permuted = lines.clone();
            permuted.reverse();
            permuted.swap(0, 2);
            assert_eq!(is_general_position(&permuted).unwrap(), verdict);
        }
    }

    #[test]
    fn intersection_examples() {
        let f7 = f(7);
        let p = intersection(&line(f7, 1, 0, 1), &line(f7, 0, 1, 2)).unwrap();
        assert_eq!((p.x().value(), p.y().value()), (6, 5));

        let f5 = f(5);
        let p = intersection(&line(f5, 1, 0, 0), &line(f5, 0, 1, 0)).unwrap();
        assert_eq!((p.x().value(), p.y().value()), (0, 0));

        assert!(matches!(
            intersection(&line(f5, 1, 0, 0), &line(f5, 1, 0, 1)),
            Err(Error::NoIntersection)
        ));
    }

    #[test]
    fn intersection_lies_on_both_lines() {
        let f101 = f(101);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let l1 = random_line(f101, &mut rng);
            let l2 = random_line(f101, &mut rng);
            match intersection(&l1, &l2) {
                Ok(p) => {
                    assert!(l1.contains(&p).unwrap());
                    assert!(l2.contains(&p).unwrap());
                }
                Err(Error::NoIntersection) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn points_on_horizontal_line() {
        let f5 = f(5);
        let pts: Vec<(u64, u64)> =
            line(f5, 0, 1, 0).points().map(|p| (p.x().value(), p.y().value())).collect();
        assert_eq!(pts, vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
    }

    #[test]
    fn points_on_vertical_line() {
        let f5 = f(5);
        let pts: Vec<(u64, u64)> =
            line(f5, 1, 0, 0).points().map(|p| (p.x().value(), p.y().value())).collect();
        assert_eq!(pts, vec![(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)]);
    }

    #[test]
    fn every_line_has_q_distinct_points() {
        let f7 = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let l = random_line(f7, &mut rng);
            let pts: Vec<Point> = l.points().collect();
            assert_eq!(pts.len(), 7);
            let distinct: HashSet<Point> = pts.iter().copied().collect();
            assert_eq!(distinct.len(), 7);
            for p in &pts {
                assert!(l.contains(p).unwrap());
            }
        }
    }

    #[test]
    fn random_configuration_passes_validation() {
        let config = Configuration::random(f(101), 5, 6, 42).unwrap();
        assert_eq!(config.n(), 5);
        assert_eq!(config.m(), 6);
        assert!(config.grid_lines().is_none());
        config.validate().unwrap();
    }

    #[test]
    fn random_configuration_is_deterministic_in_seed() {
        let a = Configuration::random(f(101), 4, 3, 7).unwrap();
        let b = Configuration::random(f(101), 4, 3, 7).unwrap();
        let c = Configuration::random(f(101), 4, 3, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_configuration_preconditions() {
        assert!(matches!(Configuration::random(f(5), 7, 1, 0), Err(Error::Parameter(_))));
        assert!(matches!(Configuration::random(f(7), 3, 6, 0), Err(Error::Parameter(_))));
        assert!(Configuration::random(f(7), 3, 5, 0).is_ok());
    }

    #[test]
    fn grid_configuration_passes_validation() {
        let config = Configuration::random_grid(f(101), 4, 5, 7).unwrap();
        assert_eq!(config.n(), 4);
        assert_eq!(config.m(), 5);
        let grid = config.grid_lines().unwrap();
        assert_eq!(grid.len(), 5);
        config.validate().unwrap();
        // Joint general position of the full family.
        let mut all = config.lines().to_vec();
        all.extend_from_slice(grid);
        assert!(is_general_position(&all).unwrap());
    }

    #[test]
    fn grid_configuration_preconditions() {
        assert!(matches!(Configuration::random_grid(f(5), 3, 4, 0), Err(Error::Parameter(_))));
        assert!(Configuration::random_grid(f(13), 3, 4, 0).is_ok());
    }

    #[test]
    fn grid_configuration_budget_exhausts_at_extreme_density() {
        // 7 joint lines over F_7 must occupy 7 of the 8 directions with no
        // three concurrent; the acceptance rate is below 1e-4, so the
        // rejection budget runs out.
        assert!(matches!(
            Configuration::random_grid(f(7), 3, 4, 0),
            Err(Error::GenerationFailure(GENERATION_BUDGET))
        ));
    }

    #[test]
    fn manual_grid_example() {
        // L1: y = 0, L2: x + y + 1 = 0 crossed with M1: x - 1 = 0 and
        // M2: x - 2 = 0 over F_5. The M_j are mutually parallel, which the
        // grid construction tolerates: only L x M intersections are needed.
        let f5 = f(5);
        let l = vec![line(f5, 0, 1, 0), line(f5, 1, 1, 1)];
        let m = vec![line(f5, 1, 0, 4), line(f5, 1, 0, 3)];
        let config = Configuration::from_grid_lines(l, m).unwrap();
        let coords: Vec<Vec<(u64, u64)>> = config
            .points()
            .iter()
            .map(|row| row.iter().map(|p| (p.x().value(), p.y().value())).collect())
            .collect();
        assert_eq!(coords, vec![vec![(1, 0), (2, 0)], vec![(1, 3), (2, 2)]]);
        config.validate().unwrap();
    }

    #[test]
    fn intersection_count_and_union_size() {
        // n lines in general position meet in n(n-1)/2 distinct points and
        // cover nq - n(n-1)/2 rational points in total.
        let config = Configuration::random(f(53), 4, 5, 1).unwrap();
        let inters: HashSet<Point> = config.intersection_points().iter().copied().collect();
        assert_eq!(inters.len(), 6);
        let union: HashSet<Point> = config.lines().iter().flat_map(|l| l.points()).collect();
        assert_eq!(union.len(), (4 * 53 - 6) as usize);
    }

    #[test]
    fn validation_rejects_point_off_line() {
        let f7 = f(7);
        let lines = vec![line(f7, 1, 0, 0), line(f7, 0, 1, 0)];
        let p = |x, y| Point::new(f7.element(x).unwrap(), f7.element(y).unwrap()).unwrap();
        let err = Configuration::new(lines, vec![vec![p(1, 1)], vec![p(1, 0)]]).unwrap_err();
        assert!(matches!(err, Error::InvalidConfiguration(_)));
    }

    #[test]
    fn validation_rejects_intersection_point() {
        let f7 = f(7);
        let lines = vec![line(f7, 1, 0, 0), line(f7, 0, 1, 0)];
        let p = |x, y| Point::new(f7.element(x).unwrap(), f7.element(y).unwrap()).unwrap();
        // (0, 0) is the intersection of the two axes.
        let err = Configuration::new(lines, vec![vec![p(0, 1)], vec![p(0, 0)]]).unwrap_err();
        assert!(matches!(err, Error::InvalidConfiguration(_)));
    }

    #[test]
    fn validation_rejects_duplicate_points() {
        let f7 = f(7);
        let lines = vec![line(f7, 1, 0, 0), line(f7, 0, 1, 0)];
        let p = |x, y| Point::new(f7.element(x).unwrap(), f7.element(y).unwrap()).unwrap();
        let err =
            Configuration::new(lines, vec![vec![p(0, 1), p(0, 1)], vec![p(1, 0), p(2, 0)]])
                .unwrap_err();
        assert!(matches!(err, Error::InvalidConfiguration(_)));
    }

    #[test]
    fn validation_rejects_single_line() {
        let f7 = f(7);
        let lines = vec![line(f7, 1, 0, 0)];
        let p = Point::new(f7.element(0).unwrap(), f7.element(1).unwrap()).unwrap();
        let err = Configuration::new(lines, vec![vec![p]]).unwrap_err();
        assert!(matches!(err, Error::Parameter(_) | Error::InvalidConfiguration(_)));
    }
}
