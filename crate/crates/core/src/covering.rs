//! Diagonal affine maps and the box coverings they generate.
//!
//! A covering is the family `Q_T = T(Q)` of images of one open base box `Q`
//! under invertible diagonal affine maps `T ξ = A ξ + c`, together with a
//! compactly contained inner box `P`, anchor points `ξ_T ∈ Q_T` and weights
//! `ω_T = 1 + ‖ξ_T‖₂`.
//!
//! Coverings can be flagged `periodic`, in which case all geometry
//! (membership, intersection, anchor distance) is taken modulo the integer
//! lattice. This is how frequency coverings built from a frame on a
//! length-`L` grid live on the unit torus `[0, 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The weight function `u(ξ) = 1 + ‖ξ‖₂`.
pub fn weight_fn(point: &[f64]) -> f64 {
    1.0 + point.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// An open axis-aligned box, one `[lo, hi]` pair per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OpenBox {
    bounds: Vec<[f64; 2]>,
}

impl OpenBox {
    pub fn new(bounds: Vec<[f64; 2]>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::invalid("box must have at least one coordinate"));
        }
        for (i, &[lo, hi]) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(format!(
                    "box coordinate {i} is not a nonempty finite interval: ({lo}, {hi})"
                )));
            }
        }
        Ok(Self { bounds })
    }

    /// The cube `(lo, hi)^d`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![[lo, hi]; dim])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.bounds.iter().map(|[lo, hi]| hi - lo)
    }

    pub fn volume(&self) -> f64 {
        self.widths().product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.bounds.iter().map(|[lo, hi]| 0.5 * (lo + hi)).collect()
    }

    /// Strict (open) membership.
    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && self
                .bounds
                .iter()
                .zip(point)
                .all(|(&[lo, hi], &x)| lo < x && x < hi)
    }

    /// Membership modulo the integer lattice.
    pub fn contains_periodic(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && self
                .bounds
                .iter()
                .zip(point)
                .all(|(&[lo, hi], &x)| open_interval_has_integer(lo - x, hi - x))
    }

    /// Open intersection: boxes that merely touch do not intersect.
    pub fn intersects(&self, other: &OpenBox) -> bool {
        self.dim() == other.dim()
            && self
                .bounds
                .iter()
                .zip(&other.bounds)
                .all(|(&[a0, a1], &[b0, b1])| a0 < b1 && b0 < a1)
    }

    /// Open intersection after some integer translation of `other`.
    pub fn intersects_periodic(&self, other: &OpenBox) -> bool {
        self.dim() == other.dim()
            && self
                .bounds
                .iter()
                .zip(&other.bounds)
                .all(|(&[a0, a1], &[b0, b1])| open_interval_has_integer(a0 - b1, a1 - b0))
    }

    /// `closure(self) ⊂ other`, checked per coordinate with strict inequalities.
    pub fn compactly_within(&self, other: &OpenBox) -> bool {
        self.dim() == other.dim()
            && self
                .bounds
                .iter()
                .zip(&other.bounds)
                .all(|(&[a0, a1], &[b0, b1])| b0 < a0 && a1 < b1)
    }

    /// Extreme values of `u` over the closed box: the maximum sits at a
    /// corner, the minimum at the point closest to the origin.
    fn weight_extremes(&self) -> (f64, f64) {
        let far: f64 = self
            .bounds
            .iter()
            .map(|&[lo, hi]| lo.abs().max(hi.abs()).powi(2))
            .sum::<f64>()
            .sqrt();
        let near: f64 = self
            .bounds
            .iter()
            .map(|&[lo, hi]| 0.0_f64.clamp(lo, hi).powi(2))
            .sum::<f64>()
            .sqrt();
        (1.0 + near, 1.0 + far)
    }
}

fn open_interval_has_integer(lo: f64, hi: f64) -> bool {
    lo.floor() + 1.0 < hi
}

fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            let d = d - d.round();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `T ξ = diag(scale) ξ + offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAffineMap")]
pub struct AffineMap {
    scale: Vec<f64>,
    offset: Vec<f64>,
}

#[derive(Deserialize)]
struct RawAffineMap {
    scale: Vec<f64>,
    offset: Vec<f64>,
}

impl TryFrom<RawAffineMap> for AffineMap {
    type Error = Error;

    fn try_from(raw: RawAffineMap) -> Result<Self> {
        AffineMap::new(raw.scale, raw.offset)
    }
}

impl AffineMap {
    pub fn new(scale: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        if scale.is_empty() {
            return Err(Error::invalid("affine map needs at least one coordinate"));
        }
        if scale.len() != offset.len() {
            return Err(Error::DimensionMismatch {
                expected: scale.len(),
                found: offset.len(),
            });
        }
        if let Some(bad) = scale.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::invalid(format!(
                "scale components must be positive and finite, got {bad}"
            )));
        }
        if offset.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("offset components must be finite"));
        }
        Ok(Self { scale, offset })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            scale: vec![1.0; dim],
            offset: vec![0.0; dim],
        }
    }

    /// Isotropic map `ξ ↦ scale·ξ + offset`.
    pub fn isotropic(scale: f64, offset: Vec<f64>) -> Result<Self> {
        Self::new(vec![scale; offset.len()], offset)
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// `|T| = |det A|`.
    pub fn det(&self) -> f64 {
        self.scale.iter().product()
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }

    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(point.len())?;
        Ok(point
            .iter()
            .zip(self.scale.iter().zip(&self.offset))
            .map(|(x, (a, c))| a * x + c)
            .collect())
    }

    pub fn apply_inverse(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(point.len())?;
        Ok(point
            .iter()
            .zip(self.scale.iter().zip(&self.offset))
            .map(|(x, (a, c))| (x - c) / a)
            .collect())
    }

    pub fn image_box(&self, bx: &OpenBox) -> Result<OpenBox> {
        self.check_dim(bx.dim())?;
        let bounds = bx
            .bounds()
            .iter()
            .zip(self.scale.iter().zip(&self.offset))
            .map(|(&[lo, hi], (a, c))| [a * lo + c, a * hi + c])
            .collect();
        Ok(OpenBox { bounds })
    }

    /// `‖A_other⁻¹ A_self‖_{ℓ∞}` for diagonal matrices.
    pub fn relative_norm(&self, other: &AffineMap) -> f64 {
        self.scale
            .iter()
            .zip(&other.scale)
            .map(|(a, b)| a / b)
            .fold(0.0, f64::max)
    }

    /// `‖A⁻¹‖_{ℓ∞}`.
    pub fn inverse_norm(&self) -> f64 {
        self.scale.iter().map(|a| 1.0 / a).fold(0.0, f64::max)
    }
}

pub fn apply_affine(map: &AffineMap, point: &[f64]) -> Result<Vec<f64>> {
    map.apply(point)
}

pub fn image_box(map: &AffineMap, bx: &OpenBox) -> Result<OpenBox> {
    map.image_box(bx)
}

/// A finite structured-covering candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCovering")]
pub struct Covering {
    dimension: usize,
    base_box: OpenBox,
    inner_box: OpenBox,
    maps: Vec<AffineMap>,
    anchors: Vec<Vec<f64>>,
    weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    periodic: bool,
}

#[derive(Deserialize)]
struct RawCovering {
    dimension: usize,
    base_box: OpenBox,
    inner_box: OpenBox,
    maps: Vec<AffineMap>,
    anchors: Vec<Vec<f64>>,
    weights: Vec<f64>,
    #[serde(default)]
    periodic: bool,
}

impl TryFrom<RawCovering> for Covering {
    type Error = Error;

    fn try_from(raw: RawCovering) -> Result<Self> {
        let cov = Covering::new(
            raw.dimension,
            raw.base_box,
            raw.inner_box,
            raw.maps,
            raw.anchors,
        )?
        .with_periodic(raw.periodic);
        if raw.weights.len() != cov.weights.len() {
            return Err(Error::LengthMismatch {
                expected: cov.weights.len(),
                found: raw.weights.len(),
            });
        }
        for (i, (w, expected)) in raw.weights.iter().zip(&cov.weights).enumerate() {
            if (w - expected).abs() > 1e-12 * expected {
                return Err(Error::invalid(format!(
                    "weight {i} is {w}, expected 1 + |anchor| = {expected}"
                )));
            }
        }
        Ok(cov)
    }
}

impl Covering {
    pub fn new(
        dimension: usize,
        base_box: OpenBox,
        inner_box: OpenBox,
        maps: Vec<AffineMap>,
        anchors: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let check = |found: usize| -> Result<()> {
            if found != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found,
                });
            }
            Ok(())
        };
        check(base_box.dim())?;
        check(inner_box.dim())?;
        if !inner_box.compactly_within(&base_box) {
            return Err(Error::invalid(
                "inner box must be compactly contained in the base box",
            ));
        }
        if maps.len() != anchors.len() {
            return Err(Error::LengthMismatch {
                expected: maps.len(),
                found: anchors.len(),
            });
        }
        for (i, (map, anchor)) in maps.iter().zip(&anchors).enumerate() {
            check(map.dim())?;
            check(anchor.len())?;
            let image = map.image_box(&base_box)?;
            if !image.contains(anchor) {
                return Err(Error::invalid(format!(
                    "anchor {i} = {anchor:?} is not inside its image box {:?}",
                    image.bounds()
                )));
            }
        }
        let weights = anchors.iter().map(|a| weight_fn(a)).collect();
        Ok(Self {
            dimension,
            base_box,
            inner_box,
            maps,
            anchors,
            weights,
            periodic: false,
        })
    }

    /// Mark the covering as living on the unit torus.
    pub fn with_periodic(mut self, periodic: bool) -> Self {
        self.periodic = periodic;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn base_box(&self) -> &OpenBox {
        &self.base_box
    }

    pub fn inner_box(&self) -> &OpenBox {
        &self.inner_box
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn anchors(&self) -> &[Vec<f64>] {
        &self.anchors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `Q_T` for member `i`.
    pub fn image(&self, i: usize) -> OpenBox {
        self.maps[i]
            .image_box(&self.base_box)
            .expect("dimensions checked at construction")
    }

    /// `P_T` for member `i`.
    pub fn inner_image(&self, i: usize) -> OpenBox {
        self.maps[i]
            .image_box(&self.inner_box)
            .expect("dimensions checked at construction")
    }

    /// `|Q_T| = |T|·|Q|`.
    pub fn volume(&self, i: usize) -> f64 {
        self.maps[i].det() * self.base_box.volume()
    }

    fn boxes_meet(&self, a: &OpenBox, b: &OpenBox) -> bool {
        if self.periodic {
            a.intersects_periodic(b)
        } else {
            a.intersects(b)
        }
    }

    fn box_holds(&self, bx: &OpenBox, point: &[f64]) -> bool {
        if self.periodic {
            bx.contains_periodic(point)
        } else {
            bx.contains(point)
        }
    }

    fn anchor_distance(&self, i: usize, j: usize) -> f64 {
        if self.periodic {
            torus_distance(&self.anchors[i], &self.anchors[j])
        } else {
            euclidean_distance(&self.anchors[i], &self.anchors[j])
        }
    }
}

/// Neighbor index sets `T̃ = {T' : Q_T' ∩ Q_T ≠ ∅}`; each set contains `T`.
pub fn neighbor_sets(cov: &Covering) -> Vec<Vec<usize>> {
    let images: Vec<OpenBox> = (0..cov.len()).map(|i| cov.image(i)).collect();
    (0..images.len())
        .map(|i| {
            (0..images.len())
                .filter(|&j| i == j || cov.boxes_meet(&images[i], &images[j]))
                .collect()
        })
        .collect()
}

/// `a⁺_T = Σ_{T' ∈ T̃} a_T'`.
pub fn plus_operator<V>(values: &[V], neighbors: &[Vec<usize>]) -> Result<Vec<V>>
where
    V: Copy + Default + std::ops::AddAssign,
{
    if values.len() != neighbors.len() {
        return Err(Error::LengthMismatch {
            expected: neighbors.len(),
            found: values.len(),
        });
    }
    neighbors
        .iter()
        .map(|set| {
            let mut acc = V::default();
            for &j in set {
                let v = values.get(j).ok_or(Error::LengthMismatch {
                    expected: values.len(),
                    found: j + 1,
                })?;
                acc += *v;
            }
            Ok(acc)
        })
        .collect()
}

/// Computable bound on the norm of the plus operator on `ℓ^q_{ω^s}`:
/// `n0 · max_{T' ∈ T̃} (ω_T / ω_T')^{|s|}`.
pub fn plus_operator_bound(cov: &Covering, neighbors: &[Vec<usize>], s: f64) -> f64 {
    let w = cov.weights();
    let n0 = neighbors.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let distortion = neighbors
        .iter()
        .enumerate()
        .flat_map(|(i, set)| set.iter().map(move |&j| (w[i] / w[j]).powf(s.abs())))
        .fold(1.0, f64::max);
    n0 * distortion
}

/// Region on which coverage is checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// A closed box, one `[lo, hi]` pair per coordinate.
    Box(Vec<[f64; 2]>),
    /// The unit torus `[0, 1)^d`.
    Torus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

impl Violation {
    fn new(axiom: &str, detail: impl Into<String>) -> Self {
        Self {
            axiom: axiom.to_string(),
            detail: detail.into(),
        }
    }
}

/// Outcome of checking the structured-covering axioms on a finite family.
///
/// Unbounded quantities (`delta` of a single member, an infinite
/// `gamma_min`) serialize as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub covers_domain: bool,
    pub n0: usize,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K_star")]
    pub k_star: f64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub delta: f64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub gamma_min: f64,
    pub gamma_constant: f64,
    pub moderation_constant: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate with an automatically chosen grid (spacing a quarter of the
/// finest inner-box width).
pub fn validate_structured(cov: &Covering, domain: &Domain) -> Result<ValidationReport> {
    if cov.is_empty() {
        return Err(Error::EmptyCovering);
    }
    let finest = finest_inner_width(cov);
    let points = domain_extents(cov, domain)?
        .iter()
        .map(|[lo, hi]| (((hi - lo) / (0.25 * finest)).ceil() as usize + 1).max(2))
        .max()
        .unwrap_or(2);
    validate_structured_with(cov, domain, points)
}

/// Validate with `points_per_axis` coverage samples along each coordinate.
///
/// Errors if the resulting spacing exceeds half the finest inner-box width.
pub fn validate_structured_with(
    cov: &Covering,
    domain: &Domain,
    points_per_axis: usize,
) -> Result<ValidationReport> {
    if cov.is_empty() {
        return Err(Error::EmptyCovering);
    }
    let extents = domain_extents(cov, domain)?;
    let finest = finest_inner_width(cov);
    let torus = matches!(domain, Domain::Torus);
    let spacing = extents
        .iter()
        .map(|[lo, hi]| grid_spacing(*lo, *hi, points_per_axis, torus))
        .fold(0.0, f64::max);
    if points_per_axis < 2 || spacing > 0.5 * finest {
        return Err(Error::GridTooCoarse {
            spacing,
            limit: 0.5 * finest,
        });
    }

    let mut violations = Vec::new();
    if !cov.inner_box.compactly_within(&cov.base_box) {
        violations.push(Violation::new(
            "inner_box",
            "inner box is not compactly contained in the base box",
        ));
    }

    let inner: Vec<OpenBox> = (0..cov.len()).map(|i| cov.inner_image(i)).collect();
    let outer: Vec<OpenBox> = (0..cov.len()).map(|i| cov.image(i)).collect();
    let mut covers_domain = true;
    for point in GridPoints::new(&extents, points_per_axis, torus) {
        let in_inner = inner.iter().any(|b| cov.box_holds(b, &point));
        let in_outer = in_inner || outer.iter().any(|b| cov.box_holds(b, &point));
        if !(in_inner && in_outer) {
            covers_domain = false;
            violations.push(Violation::new(
                "admissible_covering",
                format!("grid point {point:?} is not covered by any inner box"),
            ));
            break;
        }
    }

    let neighbors = neighbor_sets(cov);
    let n0 = neighbors.iter().map(Vec::len).max().unwrap_or(0);
    let k = neighbors
        .iter()
        .enumerate()
        .flat_map(|(i, set)| set.iter().map(move |&j| (i, j)))
        .map(|(i, j)| cov.maps[i].relative_norm(&cov.maps[j]))
        .fold(0.0, f64::max);
    let k_star = cov
        .maps
        .iter()
        .map(AffineMap::inverse_norm)
        .fold(0.0, f64::max);

    for (i, anchor) in cov.anchors.iter().enumerate() {
        if !outer[i].contains(anchor) {
            violations.push(Violation::new(
                "anchor_membership",
                format!("anchor {i} lies outside its image box"),
            ));
        }
    }

    let mut delta = f64::INFINITY;
    let mut closest = (0, 0);
    for i in 0..cov.len() {
        for j in (i + 1)..cov.len() {
            let d = cov.anchor_distance(i, j);
            if d < delta {
                delta = d;
                closest = (i, j);
            }
        }
    }
    if delta <= 0.0 {
        violations.push(Violation::new(
            "separation",
            format!("anchors {} and {} coincide", closest.0, closest.1),
        ));
    }

    // |Q_T| <= C ω_T^γ: exponent from members with ω_T > 1, constant from
    // members anchored at the origin where no exponent can help.
    let mut gamma_min = 0.0_f64;
    let mut gamma_constant = 1.0_f64;
    for (i, &w) in cov.weights.iter().enumerate() {
        let vol = cov.volume(i);
        if w > 1.0 {
            gamma_min = gamma_min.max(vol.ln() / w.ln());
        } else {
            gamma_constant = gamma_constant.max(vol);
        }
    }
    if !gamma_min.is_finite() {
        violations.push(Violation::new(
            "weight_growth",
            "no finite exponent bounds the box volumes",
        ));
    }

    let moderation_constant = outer
        .iter()
        .map(|b| {
            let (lo, hi) = b.weight_extremes();
            hi / lo
        })
        .fold(1.0, f64::max);

    Ok(ValidationReport {
        covers_domain,
        n0,
        k,
        k_star,
        delta,
        gamma_min,
        gamma_constant,
        moderation_constant,
        violations,
    })
}

fn finest_inner_width(cov: &Covering) -> f64 {
    (0..cov.len())
        .flat_map(|i| cov.inner_image(i).widths().collect::<Vec<_>>())
        .fold(f64::INFINITY, f64::min)
}

fn domain_extents(cov: &Covering, domain: &Domain) -> Result<Vec<[f64; 2]>> {
    match domain {
        Domain::Torus => Ok(vec![[0.0, 1.0]; cov.dimension()]),
        Domain::Box(bounds) => {
            if bounds.len() != cov.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: cov.dimension(),
                    found: bounds.len(),
                });
            }
            if bounds.iter().any(|[lo, hi]| !(lo <= hi)) {
                return Err(Error::invalid("domain bounds must satisfy lo <= hi"));
            }
            Ok(bounds.clone())
        }
    }
}

fn grid_spacing(lo: f64, hi: f64, n: usize, torus: bool) -> f64 {
    if torus {
        (hi - lo) / n as f64
    } else {
        (hi - lo) / (n.max(2) - 1) as f64
    }
}

/// Tensor grid over a box: endpoints included for closed boxes, cell
/// centers on the torus.
struct GridPoints<'a> {
    extents: &'a [[f64; 2]],
    n: usize,
    torus: bool,
    index: Vec<usize>,
    done: bool,
}

impl<'a> GridPoints<'a> {
    fn new(extents: &'a [[f64; 2]], n: usize, torus: bool) -> Self {
        Self {
            extents,
            n,
            torus,
            index: vec![0; extents.len()],
            done: n == 0,
        }
    }
}

impl Iterator for GridPoints<'_> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.done {
            return None;
        }
        let point = self
            .index
            .iter()
            .zip(self.extents)
            .map(|(&i, &[lo, hi])| {
                let h = grid_spacing(lo, hi, self.n, self.torus);
                if self.torus {
                    lo + (i as f64 + 0.5) * h
                } else {
                    lo + i as f64 * h
                }
            })
            .collect();
        let mut axis = 0;
        loop {
            if axis == self.index.len() {
                self.done = true;
                break;
            }
            self.index[axis] += 1;
            if self.index[axis] < self.n {
                break;
            }
            self.index[axis] = 0;
            axis += 1;
        }
        Some(point)
    }
}

/// Uniform covering by unit translates of the cube of side `r` centered at
/// the origin, `k ∈ {−range..range}^d`, anchors `ξ_{T_k} = k ∈ Q_{T_k}`.
pub fn modulation_covering(dim: usize, r: f64, range: i64) -> Result<Covering> {
    if !(r > 1.0) {
        return Err(Error::invalid(format!(
            "modulation side length must exceed 1, got {r}"
        )));
    }
    if dim == 0 || range < 0 {
        return Err(Error::invalid("need dim >= 1 and range >= 0"));
    }
    let inner = 0.5 * (1.0 + r);
    let base = OpenBox::cube(dim, -0.5 * r, 0.5 * r)?;
    let inner_box = OpenBox::cube(dim, -0.5 * inner, 0.5 * inner)?;
    let mut maps = Vec::new();
    let mut anchors = Vec::new();
    for k in lattice_points(dim, range) {
        let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        // Indexed so that Q_{T_k} is centered at k; the family {ξ − k} over a
        // symmetric lattice box is the same set of maps.
        maps.push(AffineMap::new(vec![1.0; dim], kf.clone())?);
        anchors.push(kf);
    }
    Covering::new(dim, base, inner_box, maps, anchors)
}

fn lattice_points(dim: usize, range: i64) -> Vec<Vec<i64>> {
    let side: Vec<i64> = (-range..=range).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                side.iter().map(move |&k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

fn besov_v(k: i64) -> f64 {
    match k {
        1 => 0.5,
        -1 => -0.5,
        2 => 1.5,
        -2 => -1.5,
        _ => unreachable!("index set is {{±1, ±2}}"),
    }
}

/// The index set `E = E₂^d \ E₁^d` with `E₂ = {±1, ±2}`, `E₁ = {±1}`,
/// in lexicographic order.
pub fn besov_index_set(dim: usize) -> Vec<Vec<i64>> {
    let e2 = [-2_i64, -1, 1, 2];
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                e2.iter().map(move |&k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.retain(|k| k.iter().any(|v| v.abs() == 2));
    out
}

/// Dyadic covering `{I} ∪ {T_{j,k}}` with `T_{j,k} ξ = 2^j ξ + c_{j,k}`,
/// `c_{j,k} = 2^j (v(k_1), …, v(k_d))`, over the cube of side `r` centered at
/// the origin, for `1 ≤ j ≤ j_max` and `k ∈ E`.
pub fn besov_covering(dim: usize, r: f64, j_max: u32) -> Result<Covering> {
    if !(r > 2.0) {
        return Err(Error::invalid(format!(
            "Besov side length must exceed 2, got {r}"
        )));
    }
    if dim == 0 || j_max < 1 {
        return Err(Error::invalid("need dim >= 1 and j_max >= 1"));
    }
    let inner = 0.5 * (2.0 + r);
    let base = OpenBox::cube(dim, -0.5 * r, 0.5 * r)?;
    let inner_box = OpenBox::cube(dim, -0.5 * inner, 0.5 * inner)?;
    let mut maps = vec![AffineMap::identity(dim)];
    let mut anchors = vec![vec![0.0; dim]];
    let index_set = besov_index_set(dim);
    for j in 1..=j_max {
        let scale = 2f64.powi(j as i32);
        for k in &index_set {
            let c: Vec<f64> = k.iter().map(|&v| scale * besov_v(v)).collect();
            maps.push(AffineMap::isotropic(scale, c.clone())?);
            anchors.push(c);
        }
    }
    Covering::new(dim, base, inner_box, maps, anchors)
}

/// Covering compatible with a painless frame: `Q = (0,1)^d`,
/// `A_m = (2ε_m + 1/a_m) I`, `c_m = b_m − ε_m` with `ε_m = C*/a_m`, so that
/// `Q_{T_m} = (−ε_m, 1/a_m + ε_m)^d + b_m`. Anchors are the `b_m`.
pub fn covering_from_nsgf(channels: &[(Vec<f64>, f64)], c_star: f64) -> Result<Covering> {
    if !(c_star > 0.0 && c_star.is_finite()) {
        return Err(Error::invalid(format!("C* must be positive, got {c_star}")));
    }
    if channels.is_empty() {
        return Err(Error::EmptyCovering);
    }
    for i in 0..channels.len() {
        for j in (i + 1)..channels.len() {
            if channels[i].0 == channels[j].0 {
                return Err(Error::DuplicateAnchor {
                    first: i,
                    second: j,
                });
            }
        }
    }
    nsgf_covering_unchecked(channels, c_star)
}

/// [`covering_from_nsgf`] without the distinct-offset requirement, for
/// validators that must report rather than reject duplicates.
pub(crate) fn nsgf_covering_unchecked(
    channels: &[(Vec<f64>, f64)],
    c_star: f64,
) -> Result<Covering> {
    let Some(first) = channels.first() else {
        return Err(Error::EmptyCovering);
    };
    let dim = first.0.len();
    let margin = c_star / (2.0 * c_star + 1.0);
    let base = OpenBox::cube(dim, 0.0, 1.0)?;
    let inner_box = OpenBox::cube(dim, margin, 1.0 - margin)?;
    let mut maps = Vec::with_capacity(channels.len());
    let mut anchors = Vec::with_capacity(channels.len());
    for (b, a) in channels {
        if !(*a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!(
                "time step must be positive, got {a}"
            )));
        }
        if b.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.len(),
            });
        }
        let eps = c_star / a;
        let offset = b.iter().map(|bj| bj - eps).collect();
        maps.push(AffineMap::isotropic(2.0 * eps + 1.0 / a, offset)?);
        anchors.push(b.clone());
    }
    Covering::new(dim, base, inner_box, maps, anchors)
}
