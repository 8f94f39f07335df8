//! Measurable planar sets and their relative density with respect to a
//! weight's adapted disks.
//!
//! Regions are boolean expression trees over a few primitives (disks,
//! rectangles, half-planes, and a periodic "polka-dot" lattice of disks),
//! with a small text syntax such as `complement(polka(pitch=0.2821,dot=0.0705))`
//! so configurations can name them. The density of a region `E` is the
//! infimum over probe centers `z` of the area fraction `|E ∩ D^r(z)|/|D^r(z)|`,
//! estimated by stratified Monte Carlo with one RNG stream per probe.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{stream, StreamTag};
use crate::weights::{WeightError, WeightSpec};

/// Tolerance used for the metric function when sizing adapted disks.
const RHO_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("region parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("renormalization needs r < 1, got {r}")]
    InvalidRadius { r: f64 },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// Expression tree for a measurable set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegionExpr {
    /// The whole plane.
    Full,
    /// The empty set.
    Empty,
    /// Open disk of the given center and radius.
    Disk { x: f64, y: f64, radius: f64 },
    /// Closed axis-parallel rectangle `[x0,x1] × [y0,y1]`.
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    /// `{ z : Re(z·e^{−iθ}) > offset }`.
    HalfPlane { theta: f64, offset: f64 },
    /// Union of closed disks of radius `dot` centered at the square lattice
    /// `pitch·(m + in)`, m,n ∈ ℤ.
    Polka { pitch: f64, dot: f64 },
    Complement(Box<RegionExpr>),
    Union(Vec<RegionExpr>),
    Intersection(Vec<RegionExpr>),
}

impl RegionExpr {
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            RegionExpr::Full => true,
            RegionExpr::Empty => false,
            RegionExpr::Disk { x, y, radius } => {
                (z - Complex64::new(*x, *y)).norm_sqr() < radius * radius
            }
            RegionExpr::Rect { x0, y0, x1, y1 } => {
                z.re >= *x0 && z.re <= *x1 && z.im >= *y0 && z.im <= *y1
            }
            RegionExpr::HalfPlane { theta, offset } => {
                (z * Complex64::from_polar(1.0, -theta)).re > *offset
            }
            RegionExpr::Polka { pitch, dot } => {
                let fx = z.re / pitch;
                let fy = z.im / pitch;
                let dx = (fx - fx.round()) * pitch;
                let dy = (fy - fy.round()) * pitch;
                dx * dx + dy * dy <= dot * dot
            }
            RegionExpr::Complement(inner) => !inner.contains(z),
            RegionExpr::Union(parts) => parts.iter().any(|p| p.contains(z)),
            RegionExpr::Intersection(parts) => parts.iter().all(|p| p.contains(z)),
        }
    }

    /// Closed-form area for the bounded primitives; `None` when no closed
    /// form is implemented (boolean combinations, unbounded sets).
    pub fn area(&self) -> Option<f64> {
        match self {
            RegionExpr::Empty => Some(0.0),
            RegionExpr::Disk { radius, .. } => Some(std::f64::consts::PI * radius * radius),
            RegionExpr::Rect { x0, y0, x1, y1 } => Some((x1 - x0).max(0.0) * (y1 - y0).max(0.0)),
            _ => None,
        }
    }
}

impl fmt::Display for RegionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionExpr::Full => write!(f, "full"),
            RegionExpr::Empty => write!(f, "empty"),
            RegionExpr::Disk { x, y, radius } => write!(f, "disk({x},{y},{radius})"),
            RegionExpr::Rect { x0, y0, x1, y1 } => write!(f, "rect({x0},{y0},{x1},{y1})"),
            RegionExpr::HalfPlane { theta, offset } => {
                if *offset == 0.0 {
                    write!(f, "halfplane({theta})")
                } else {
                    write!(f, "halfplane({theta},{offset})")
                }
            }
            RegionExpr::Polka { pitch, dot } => write!(f, "polka(pitch={pitch},dot={dot})"),
            RegionExpr::Complement(inner) => write!(f, "complement({inner})"),
            RegionExpr::Union(parts) => {
                write!(f, "union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            RegionExpr::Intersection(parts) => {
                write!(f, "intersection(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A measurable set: the expression tree plus the membership queries the rest
/// of the toolkit needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSet {
    expr: RegionExpr,
}

impl RegionSet {
    pub fn new(expr: RegionExpr) -> Self {
        RegionSet { expr }
    }

    /// Parses the region expression language, e.g.
    /// `union(disk(0,0,1),halfplane(0))`.
    pub fn parse(text: &str) -> Result<Self, RegionError> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let expr = p.parse_expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(RegionError::Parse {
                pos: p.pos,
                message: "trailing input".into(),
            });
        }
        Ok(RegionSet { expr })
    }

    pub fn expr(&self) -> &RegionExpr {
        &self.expr
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.expr.contains(z)
    }

    pub fn area(&self) -> Option<f64> {
        self.expr.area()
    }

    /// Canonical text form (parses back to the same tree).
    pub fn to_expression_string(&self) -> String {
        self.expr.to_string()
    }
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, RegionError> {
        Err(RegionError::Parse {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> Result<(), RegionError> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", b as char))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<&'a str, RegionError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected identifier");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn number(&mut self) -> Result<f64, RegionError> {
        self.skip_ws();
        let start = self.pos;
        let mut prev_exp = false;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            let ok = b.is_ascii_digit()
                || b == b'.'
                || b == b'e'
                || b == b'E'
                || ((b == b'+' || b == b'-') && (self.pos == start || prev_exp));
            if !ok {
                break;
            }
            prev_exp = b == b'e' || b == b'E';
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|e| RegionError::Parse {
                pos: start,
                message: format!("bad number {text:?}: {e}"),
            })
    }

    fn key_value(&mut self, key: &str) -> Result<f64, RegionError> {
        let k = self.ident()?;
        if k != key {
            return self.err(format!("expected parameter {key}, got {k}"));
        }
        self.eat(b'=')?;
        self.number()
    }

    fn parse_expr(&mut self) -> Result<RegionExpr, RegionError> {
        let name = self.ident()?;
        match name {
            "full" => Ok(RegionExpr::Full),
            "empty" => Ok(RegionExpr::Empty),
            "disk" => {
                self.eat(b'(')?;
                let x = self.number()?;
                self.eat(b',')?;
                let y = self.number()?;
                self.eat(b',')?;
                let radius = self.number()?;
                self.eat(b')')?;
                if radius < 0.0 {
                    return self.err("disk radius must be nonnegative");
                }
                Ok(RegionExpr::Disk { x, y, radius })
            }
            "rect" => {
                self.eat(b'(')?;
                let x0 = self.number()?;
                self.eat(b',')?;
                let y0 = self.number()?;
                self.eat(b',')?;
                let x1 = self.number()?;
                self.eat(b',')?;
                let y1 = self.number()?;
                self.eat(b')')?;
                Ok(RegionExpr::Rect { x0, y0, x1, y1 })
            }
            "halfplane" => {
                self.eat(b'(')?;
                let theta = self.number()?;
                let offset = if self.peek() == Some(b',') {
                    self.pos += 1;
                    self.number()?
                } else {
                    0.0
                };
                self.eat(b')')?;
                Ok(RegionExpr::HalfPlane { theta, offset })
            }
            "polka" => {
                self.eat(b'(')?;
                // Accept the two keys in either order.
                let first = self.ident()?;
                self.eat(b'=')?;
                let v1 = self.number()?;
                self.eat(b',')?;
                let (pitch, dot) = match first {
                    "pitch" => (v1, self.key_value("dot")?),
                    "dot" => {
                        let p = self.key_value("pitch")?;
                        (p, v1)
                    }
                    other => return self.err(format!("unknown polka parameter {other}")),
                };
                self.eat(b')')?;
                if pitch <= 0.0 || dot < 0.0 {
                    return self.err("polka needs pitch > 0 and dot >= 0");
                }
                Ok(RegionExpr::Polka { pitch, dot })
            }
            "complement" => {
                self.eat(b'(')?;
                let inner = self.parse_expr()?;
                self.eat(b')')?;
                Ok(RegionExpr::Complement(Box::new(inner)))
            }
            "union" | "intersection" => {
                self.eat(b'(')?;
                let mut parts = vec![self.parse_expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    parts.push(self.parse_expr()?);
                }
                self.eat(b')')?;
                if name == "union" {
                    Ok(RegionExpr::Union(parts))
                } else {
                    Ok(RegionExpr::Intersection(parts))
                }
            }
            other => self.err(format!("unknown region {other:?}")),
        }
    }
}

/// Area fraction covered by the dots of `polka(pitch,dot)` when `dot` is at
/// most half the pitch: `π·(dot/pitch)²`.
pub fn polka_fill_fraction(pitch: f64, dot: f64) -> f64 {
    std::f64::consts::PI * (dot / pitch) * (dot / pitch)
}

/// Relative density measurement: the infimum over probes of the area fraction
/// of `E` in the adapted disk, realized at `witness`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DensityReport {
    pub region: String,
    pub weight: String,
    pub gamma: f64,
    pub r: f64,
    pub witness_re: f64,
    pub witness_im: f64,
    pub estimator: String,
    pub n_probes: usize,
    pub samples_per_disk: usize,
    /// Binomial standard error of the witness-probe fraction (conservative:
    /// stratification only shrinks it).
    pub standard_error: f64,
    /// Three standard errors; the confidence half-width quoted downstream.
    pub half_width: f64,
}

/// Estimates `inf_z |E ∩ D^r(z)|/|D^r(z)|` over the probe set by stratified
/// Monte Carlo: one point per grid cell of a `k×k` stratification of the
/// disk's bounding square, `k² ≈ samples_per_disk`, with a dedicated RNG
/// stream per probe so results do not depend on evaluation order.
pub fn density(
    region: &RegionSet,
    w: &WeightSpec,
    r: f64,
    probes: &[Complex64],
    samples_per_disk: usize,
    seed: u64,
) -> Result<DensityReport, RegionError> {
    assert!(r > 0.0, "density requires r > 0");
    assert!(!probes.is_empty(), "density requires at least one probe");
    assert!(
        samples_per_disk >= 1000,
        "density requires samples_per_disk >= 1000"
    );
    let k = (samples_per_disk as f64).sqrt().floor() as usize;
    let mut gamma = f64::INFINITY;
    let mut witness = probes[0];
    let mut witness_se = 0.0;
    for (idx, &z) in probes.iter().enumerate() {
        let radius = r * w.rho(z, RHO_TOL)?;
        let mut rng = stream(seed, StreamTag::Density, idx as u64);
        let cell = 2.0 * radius / k as f64;
        let mut inside = 0u64;
        let mut hits = 0u64;
        for i in 0..k {
            for j in 0..k {
                let x = -radius + (i as f64 + rng.gen::<f64>()) * cell;
                let y = -radius + (j as f64 + rng.gen::<f64>()) * cell;
                if x * x + y * y >= radius * radius {
                    continue;
                }
                inside += 1;
                if region.contains(z + Complex64::new(x, y)) {
                    hits += 1;
                }
            }
        }
        let (fraction, se) = if inside == 0 {
            (0.0, 1.0)
        } else {
            let p = hits as f64 / inside as f64;
            (p, (p * (1.0 - p) / inside as f64).sqrt())
        };
        if fraction < gamma {
            gamma = fraction;
            witness = z;
            witness_se = se;
        }
    }
    Ok(DensityReport {
        region: region.to_expression_string(),
        weight: w.name().to_string(),
        gamma,
        r,
        witness_re: witness.re,
        witness_im: witness.im,
        estimator: "stratified_mc".into(),
        n_probes: probes.len(),
        samples_per_disk: k * k,
        standard_error: witness_se,
        half_width: 3.0 * witness_se,
    })
}

/// Rescales a `(γ, r)`-density statement with `r < 1` to the normal form at
/// `r = 1` by re-measuring at the unit adapted radius (no analytic constant
/// is applied). Returns the report at `r = 1`.
pub fn renormalize_density(
    region: &RegionSet,
    w: &WeightSpec,
    r: f64,
    probes: &[Complex64],
    samples_per_disk: usize,
    seed: u64,
) -> Result<DensityReport, RegionError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(RegionError::InvalidRadius { r });
    }
    density(region, w, 1.0, probes, samples_per_disk, seed)
}

/// Row-major probe lattice at pitch `factor·ρ` covering the square
/// `[−half_extent, half_extent]²`; the step adapts to ρ along each row, so
/// constant-ρ weights get a regular grid.
pub fn metric_probe_grid(
    w: &WeightSpec,
    half_extent: f64,
    factor: f64,
    tol: f64,
) -> Result<Vec<Complex64>, WeightError> {
    assert!(half_extent > 0.0 && factor > 0.0);
    let mut probes = Vec::new();
    let mut y = -half_extent;
    while y <= half_extent {
        let mut x = -half_extent;
        let row_step = factor * w.rho(Complex64::new(0.0, y), tol)?;
        while x <= half_extent {
            let z = Complex64::new(x, y);
            probes.push(z);
            x += factor * w.rho(z, tol)?;
        }
        y += row_step;
    }
    Ok(probes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn parse(s: &str) -> RegionSet {
        RegionSet::parse(s).unwrap()
    }

    #[test]
    fn indicator_primitives() {
        let d = parse("disk(1,0,0.5)");
        assert!(d.contains(c(1.2, 0.1)));
        assert!(!d.contains(c(0.0, 0.0)));
        let r = parse("rect(-1,-2,1,2)");
        assert!(r.contains(c(0.0, 0.0)) && r.contains(c(1.0, 2.0)));
        assert!(!r.contains(c(1.1, 0.0)));
        let h = parse("halfplane(0)");
        assert!(h.contains(c(0.1, -5.0)) && !h.contains(c(-0.1, 5.0)));
        // Rotate by π/2: now the upper half-plane.
        let h2 = parse("halfplane(1.5707963267948966)");
        assert!(h2.contains(c(3.0, 0.1)) && !h2.contains(c(3.0, -0.1)));
        let p = parse("polka(pitch=1,dot=0.25)");
        assert!(p.contains(c(2.0, 3.0)) && p.contains(c(2.2, 3.1)));
        assert!(!p.contains(c(2.5, 3.5)));
    }

    #[test]
    fn indicator_boolean_combinations() {
        let e = parse("union(disk(0,0,1),halfplane(0))");
        assert!(e.contains(c(-0.5, 0.0)));
        assert!(e.contains(c(5.0, 5.0)));
        assert!(!e.contains(c(-5.0, 0.0)));
        let i = parse("intersection(halfplane(0),disk(0,0,1))");
        assert!(i.contains(c(0.5, 0.0)));
        assert!(!i.contains(c(-0.5, 0.0)));
        let comp = parse("complement(full)");
        assert!(!comp.contains(c(0.0, 0.0)));
        assert!(parse("empty").area() == Some(0.0));
    }

    #[test]
    fn parser_roundtrip() {
        for text in [
            "full",
            "empty",
            "disk(0,0,1)",
            "disk(-1.5,2e-3,0.25)",
            "rect(0,0,1,2)",
            "halfplane(0.5)",
            "halfplane(0.5,-1)",
            "polka(pitch=0.2821,dot=0.0705)",
            "complement(polka(pitch=0.2821,dot=0.0705))",
            "union(disk(0,0,1),halfplane(0),empty)",
            "intersection(full,rect(0,0,1,1))",
        ] {
            let e = parse(text);
            let printed = e.to_expression_string();
            assert_eq!(RegionSet::parse(&printed).unwrap(), e, "roundtrip {text}");
        }
        // Whitespace and key order are tolerated.
        let a = parse(" polka( dot=0.1 , pitch=1 ) ");
        assert_eq!(a.expr(), &RegionExpr::Polka { pitch: 1.0, dot: 0.1 });
    }

    #[test]
    fn parser_rejects_garbage() {
        for bad in [
            "blob",
            "disk(1,2)",
            "polka(pitch=1)",
            "union()",
            "disk(0,0,1) trailing",
            "polka(pitch=0,dot=1)",
        ] {
            assert!(
                matches!(RegionSet::parse(bad), Err(RegionError::Parse { .. })),
                "{bad} should fail"
            );
        }
    }

    #[test]
    fn closed_form_areas_match_monte_carlo() {
        // Invariant: bounded primitives agree with MC to three standard errors.
        let mut rng = stream(7, StreamTag::AreaCheck, 0);
        for (region, x0, y0, x1, y1) in [
            (parse("disk(0.5,-0.25,0.8)"), -0.5, -1.2, 1.5, 0.8),
            (parse("rect(0,0,2,0.5)"), -0.5, -0.5, 2.5, 1.0),
        ] {
            let n = 200_000;
            let box_area = (x1 - x0) * (y1 - y0);
            let mut hits = 0u64;
            for _ in 0..n {
                let z = c(
                    x0 + (x1 - x0) * rng.gen::<f64>(),
                    y0 + (y1 - y0) * rng.gen::<f64>(),
                );
                if region.contains(z) {
                    hits += 1;
                }
            }
            let p = hits as f64 / n as f64;
            let estimate = p * box_area;
            let se = (p * (1.0 - p) / n as f64).sqrt() * box_area;
            let exact = region.area().unwrap();
            assert!(
                (estimate - exact).abs() <= 3.0 * se,
                "area {exact} vs MC {estimate} ± {se}"
            );
        }
    }

    #[test]
    fn polka_fill_fraction_matches_sampling() {
        let region = parse("polka(pitch=1,dot=0.25)");
        let want = polka_fill_fraction(1.0, 0.25);
        // Exact counting on a fine grid over one period cell.
        let n = 2001;
        let mut hits = 0u64;
        for i in 0..n {
            for j in 0..n {
                let z = c(i as f64 / n as f64, j as f64 / n as f64);
                if region.contains(z) {
                    hits += 1;
                }
            }
        }
        let got = hits as f64 / (n * n) as f64;
        assert!((got - want).abs() < 2e-3, "fraction {got} vs {want}");
    }

    #[test]
    fn density_full_and_empty() {
        let w = WeightSpec::abs2();
        let probes = [c(0.0, 0.0), c(1.0, 1.0)];
        let full = density(&parse("full"), &w, 2.0, &probes, 1000, 1).unwrap();
        assert_eq!(full.gamma, 1.0);
        let empty = density(&parse("empty"), &w, 2.0, &probes, 1000, 1).unwrap();
        assert_eq!(empty.gamma, 0.0);
        assert_eq!(empty.witness_re, 0.0);
    }

    #[test]
    fn density_polka_complement_near_lattice_fraction() {
        // Dots of radius ρ₀/4 on a pitch-ρ₀ lattice: the removed fraction is
        // π/16, so at r=2 the complement's density sits near 1 − π/16.
        let w = WeightSpec::abs2();
        let rho0 = w.rho(c(0.0, 0.0), 1e-10).unwrap();
        let region = RegionSet::new(RegionExpr::Complement(Box::new(RegionExpr::Polka {
            pitch: rho0,
            dot: rho0 / 4.0,
        })));
        let probes = [c(0.0, 0.0), c(0.5 * rho0, 0.5 * rho0), c(1.3, -0.4)];
        let rep = density(&region, &w, 2.0, &probes, 40_000, 11).unwrap();
        let flat = 1.0 - std::f64::consts::PI / 16.0;
        assert!(
            (rep.gamma - flat).abs() < 0.05,
            "gamma {} vs lattice fraction {flat}",
            rep.gamma
        );
        assert!(rep.gamma > 0.0 && rep.gamma < 1.0);
    }

    #[test]
    fn density_deterministic_across_runs() {
        let w = WeightSpec::abs2();
        let region = parse("union(disk(0,0,0.3),halfplane(1.0,0.2))");
        let probes = [c(0.0, 0.0), c(-0.7, 0.4), c(0.3, 0.3)];
        let a = density(&region, &w, 1.5, &probes, 5000, 99).unwrap();
        let b = density(&region, &w, 1.5, &probes, 5000, 99).unwrap();
        assert_eq!(a, b);
        let c_ = density(&region, &w, 1.5, &probes, 5000, 100).unwrap();
        assert_ne!(a.gamma, c_.gamma);
    }

    #[test]
    fn density_translation_covariance_exact() {
        // Shifting E and the probes by the same vector re-uses the same
        // sample offsets (per-probe streams), so for a constant-ρ weight the
        // estimate is bitwise identical.
        let w = WeightSpec::abs2();
        let shift = c(2.25, -1.5);
        let base = parse("disk(0,0,0.4)");
        let shifted = RegionSet::new(RegionExpr::Disk {
            x: shift.re,
            y: shift.im,
            radius: 0.4,
        });
        let probes: Vec<_> = [c(0.0, 0.0), c(0.2, 0.1), c(-0.3, 0.3)].to_vec();
        let probes_shifted: Vec<_> = probes.iter().map(|&z| z + shift).collect();
        let a = density(&base, &w, 1.0, &probes, 4000, 5).unwrap();
        let b = density(&shifted, &w, 1.0, &probes_shifted, 4000, 5).unwrap();
        assert_eq!(a.gamma, b.gamma);
    }

    #[test]
    fn density_monotone_and_complement_identity() {
        let w = WeightSpec::abs2();
        let probes = [c(0.0, 0.0), c(0.3, -0.2)];
        let small = density(&parse("disk(0,0,0.2)"), &w, 1.0, &probes, 4000, 3).unwrap();
        let large = density(&parse("disk(0,0,0.5)"), &w, 1.0, &probes, 4000, 3).unwrap();
        // Same streams, nested sets: pointwise monotone, hence exact.
        assert!(small.gamma <= large.gamma);
        let e = parse("halfplane(0.7,0.05)");
        let ec = RegionSet::new(RegionExpr::Complement(Box::new(e.expr().clone())));
        let g = density(&e, &w, 1.0, &probes, 4000, 3).unwrap().gamma;
        let gc = density(&ec, &w, 1.0, &probes, 4000, 3).unwrap().gamma;
        assert!(g + gc <= 1.0 + 1e-12);
    }

    #[test]
    fn renormalize_rejects_large_r_and_reruns_at_one() {
        let w = WeightSpec::abs2();
        let probes = [c(0.0, 0.0)];
        let err = renormalize_density(&parse("full"), &w, 1.0, &probes, 1000, 1).unwrap_err();
        assert!(matches!(err, RegionError::InvalidRadius { .. }));
        let rep = renormalize_density(&parse("full"), &w, 0.5, &probes, 1000, 1).unwrap();
        assert_eq!((rep.gamma, rep.r), (1.0, 1.0));
        let rep = renormalize_density(&parse("empty"), &w, 0.25, &probes, 1000, 1).unwrap();
        assert_eq!((rep.gamma, rep.r), (0.0, 1.0));
    }

    #[test]
    fn renormalized_halfplane_density_comparable() {
        // Half-plane through the witness: the fraction is scale-free (about
        // 1/2 at the boundary), so renormalizing from r=1/2 stays comparable.
        let w = WeightSpec::abs2();
        let probes = [c(0.0, 0.0), c(0.1, 0.0), c(-0.1, 0.0)];
        let region = parse("halfplane(0)");
        let at_half = density(&region, &w, 0.5, &probes, 20_000, 21).unwrap();
        let renorm = renormalize_density(&region, &w, 0.5, &probes, 20_000, 21).unwrap();
        assert_eq!(renorm.r, 1.0);
        assert!(renorm.gamma >= 0.25 * at_half.gamma);
        assert!((renorm.gamma - at_half.gamma).abs() < 0.1);
    }

    #[test]
    fn probe_grid_regular_for_constant_rho() {
        let w = WeightSpec::abs2();
        let probes = metric_probe_grid(&w, 0.5, 0.5, 1e-9).unwrap();
        assert!(probes.len() > 40);
        let rho = w.rho(c(0.0, 0.0), 1e-10).unwrap();
        // Neighbor spacing along a row is factor·ρ.
        let dx = probes[1].re - probes[0].re;
        assert!((dx - 0.5 * rho).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// De Morgan on indicators: complement of a union is the
        /// intersection of complements, at arbitrary query points.
        #[test]
        fn de_morgan_pointwise(
            x in -3.0_f64..3.0,
            y in -3.0_f64..3.0,
            r1 in 0.1_f64..1.5,
            r2 in 0.1_f64..1.5,
        ) {
            let a = RegionExpr::Disk { x: 0.5, y: 0.0, radius: r1 };
            let b = RegionExpr::Disk { x: -0.5, y: 0.25, radius: r2 };
            let lhs = RegionExpr::Complement(Box::new(RegionExpr::Union(vec![a.clone(), b.clone()])));
            let rhs = RegionExpr::Intersection(vec![
                RegionExpr::Complement(Box::new(a)),
                RegionExpr::Complement(Box::new(b)),
            ]);
            let z = Complex64::new(x, y);
            prop_assert_eq!(lhs.contains(z), rhs.contains(z));
        }

        /// Polka membership is invariant under lattice translations.
        #[test]
        fn polka_periodicity(
            x in -2.0_f64..2.0,
            y in -2.0_f64..2.0,
            m in -3i32..3,
            n in -3i32..3,
        ) {
            let p = RegionExpr::Polka { pitch: 0.75, dot: 0.2 };
            let z = Complex64::new(x, y);
            let shifted = z + Complex64::new(0.75 * m as f64, 0.75 * n as f64);
            prop_assert_eq!(p.contains(z), p.contains(shifted));
        }
    }
}
