//! Labeled 2-D constellations, bit-stream subsets, and the non-uniform
//! 16-QAM family used by hierarchical modulation.
//!
//! A constellation is an ordered set of M = 2^m points in the I/Q plane,
//! each carrying a distinct m-bit label. Bit positions are 1-based and
//! position 1 is the least significant bit of the integer label. For the
//! hierarchical 16-QAM, label bits 1-2 select the quadrant (the HP stream)
//! and bits 3-4 select the point within the quadrant (the LP stream).

use thiserror::Error;

/// A point in the I/Q plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub i: f64,
    pub q: f64,
}

impl Point {
    pub fn new(i: f64, q: f64) -> Self {
        Point { i, q }
    }

    pub fn norm_sq(&self) -> f64 {
        self.i * self.i + self.q * self.q
    }

    pub fn dist_sq(&self, other: Point) -> f64 {
        let di = self.i - other.i;
        let dq = self.q - other.q;
        di * di + dq * dq
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstellationError {
    #[error("alpha must be >= 1 and finite (got {0})")]
    InvalidAlpha(f64),
    #[error("bit positions must be non-empty, strictly increasing and >= 1")]
    InvalidStreamSpec,
    #[error("bit position {position} exceeds the constellation's {m} bits per symbol")]
    PositionOutOfRange { position: u8, m: u32 },
    #[error("bits per symbol must be in 1..=16 (got {0})")]
    InvalidBitsPerSymbol(u32),
    #[error("point count {got} does not match 2^m = {expected} for m={m}")]
    WrongPointCount { m: u32, expected: usize, got: usize },
    #[error("labels and points differ in length ({labels} labels, {points} points)")]
    LabelCountMismatch { labels: usize, points: usize },
    #[error("duplicate label {0}")]
    DuplicateLabel(u32),
    #[error("label {label} out of range for m={m}")]
    LabelOutOfRange { label: u32, m: u32 },
    #[error("duplicate constellation point ({i}, {q})")]
    DuplicatePoint { i: f64, q: f64 },
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("cannot normalize a constellation with zero average energy")]
    ZeroEnergy,
    #[error("subset index {index} out of range for a {k}-bit stream")]
    SubsetIndexOutOfRange { index: u32, k: u32 },
    #[error("degenerate constellation: coincident points")]
    DegenerateGeometry,
}

/// Constellation parameter alpha = d_h / d_l, the ratio of half the minimum
/// distance between points with different HP bits to half the minimum
/// distance between any two points. alpha = 1 is the uniform constellation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self, ConstellationError> {
        if !value.is_finite() || value < 1.0 {
            return Err(ConstellationError::InvalidAlpha(value));
        }
        Ok(Alpha(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The bit positions that make up one stream: a strictly increasing list of
/// 1-based label-bit positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamSpec {
    positions: Vec<u8>,
}

impl StreamSpec {
    pub fn new(positions: Vec<u8>) -> Result<Self, ConstellationError> {
        if positions.is_empty()
            || positions[0] < 1
            || positions.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(ConstellationError::InvalidStreamSpec);
        }
        Ok(StreamSpec { positions })
    }

    /// All m bits, i.e. the stream that carries the whole symbol.
    pub fn all_bits(m: u32) -> Self {
        StreamSpec {
            positions: (1..=m as u8).collect(),
        }
    }

    pub fn positions(&self) -> &[u8] {
        &self.positions
    }

    /// Number of bits carried by the stream.
    pub fn k(&self) -> u32 {
        self.positions.len() as u32
    }

    pub fn validate_for(&self, m: u32) -> Result<(), ConstellationError> {
        let last = *self.positions.last().expect("non-empty by construction");
        if u32::from(last) > m {
            return Err(ConstellationError::PositionOutOfRange { position: last, m });
        }
        Ok(())
    }

    /// Projects a label onto the stream's bit positions: bit n of the result
    /// is the label bit at position `positions[n]`.
    pub fn project(&self, label: u32) -> u32 {
        self.positions
            .iter()
            .enumerate()
            .fold(0, |acc, (n, &pos)| acc | (label_bit(label, pos) << n))
    }
}

/// Bit of `label` at 1-based position `position` (position 1 = LSB).
pub fn label_bit(label: u32, position: u8) -> u32 {
    (label >> (position - 1)) & 1
}

/// An ordered, labeled set of 2^m points in the I/Q plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Point>,
    labels: Vec<u32>,
    m: u32,
    name: String,
}

impl Constellation {
    /// Validates and assembles a constellation. Points are kept as given;
    /// call [`Constellation::normalize_energy`] for unit average energy.
    pub fn new(
        name: impl Into<String>,
        m: u32,
        points: Vec<Point>,
        labels: Vec<u32>,
    ) -> Result<Self, ConstellationError> {
        if m < 1 || m > 16 {
            return Err(ConstellationError::InvalidBitsPerSymbol(m));
        }
        let expected = 1usize << m;
        if points.len() != labels.len() {
            return Err(ConstellationError::LabelCountMismatch {
                labels: labels.len(),
                points: points.len(),
            });
        }
        if points.len() != expected {
            return Err(ConstellationError::WrongPointCount {
                m,
                expected,
                got: points.len(),
            });
        }
        if points.iter().any(|p| !p.i.is_finite() || !p.q.is_finite()) {
            return Err(ConstellationError::NonFiniteCoordinate);
        }
        let mut seen = vec![false; expected];
        for &label in &labels {
            if label as usize >= expected {
                return Err(ConstellationError::LabelOutOfRange { label, m });
            }
            if seen[label as usize] {
                return Err(ConstellationError::DuplicateLabel(label));
            }
            seen[label as usize] = true;
        }
        for (a, pa) in points.iter().enumerate() {
            for pb in &points[a + 1..] {
                if pa == pb {
                    return Err(ConstellationError::DuplicatePoint { i: pa.i, q: pa.q });
                }
            }
        }
        Ok(Constellation {
            points,
            labels,
            m,
            name: name.into(),
        })
    }

    /// Gray-labeled QPSK at unit average energy. Label bit 1 selects the
    /// I sign, bit 2 the Q sign.
    pub fn qpsk() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (points, labels) = (0u32..4)
            .map(|label| {
                let i = if label_bit(label, 1) == 0 { s } else { -s };
                let q = if label_bit(label, 2) == 0 { s } else { -s };
                (Point::new(i, q), label)
            })
            .unzip();
        Constellation::new("qpsk", 2, points, labels)
            .expect("generator emits a valid constellation")
    }

    /// Uniform Gray-labeled 16-QAM at unit average energy, built directly
    /// from the {-3,-1,1,3}^2 grid.
    pub fn uniform_16qam() -> Self {
        let mut points = Vec::with_capacity(16);
        let mut labels = Vec::with_capacity(16);
        for &ci in &[-3.0, -1.0, 1.0, 3.0] {
            for &cq in &[-3.0, -1.0, 1.0, 3.0] {
                points.push(Point::new(ci, cq));
                labels.push(pam_gray_label(ci) | (pam_gray_label(cq) << 1));
            }
        }
        let c = Constellation::new("qam16", 4, points, labels)
            .expect("generator emits a valid constellation");
        c.normalize_energy().expect("grid has nonzero energy")
    }

    /// Non-uniform hierarchical 16-QAM with constellation parameter alpha,
    /// normalized to unit average energy.
    ///
    /// Before normalization the per-quadrant coordinate magnitudes are
    /// {alpha, alpha + 2} on each axis (d_l = 1, d_h = alpha). Label bits 1-2
    /// pick the quadrant, bits 3-4 the point inside it, Gray-consistent along
    /// each axis. alpha = 1 reproduces the uniform 16-QAM.
    pub fn nonuniform_16qam(alpha: Alpha) -> Self {
        let inner = alpha.value();
        let outer = alpha.value() + 2.0;
        let (points, labels) = (0u32..16)
            .map(|label| {
                let mag_i = if label_bit(label, 3) == 0 { inner } else { outer };
                let mag_q = if label_bit(label, 4) == 0 { inner } else { outer };
                let i = if label_bit(label, 1) == 0 { mag_i } else { -mag_i };
                let q = if label_bit(label, 2) == 0 { mag_q } else { -mag_q };
                (Point::new(i, q), label)
            })
            .unzip();
        let name = format!("qam16-hier-a{}", alpha.value());
        let c = Constellation::new(name, 4, points, labels)
            .expect("generator emits a valid constellation");
        c.normalize_energy().expect("nonzero energy for alpha >= 1")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of points, M = 2^m.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Average symbol energy (1/M) sum of |x|^2.
    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(Point::norm_sq).sum::<f64>() / self.size() as f64
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.average_energy() - 1.0).abs() <= tol
    }

    /// Uniformly rescales so the average symbol energy is 1. Labels are
    /// unchanged. Input that is already at unit energy (within fp noise) is
    /// returned unchanged, which makes the operation idempotent.
    pub fn normalize_energy(&self) -> Result<Self, ConstellationError> {
        let scale = unit_energy_scale(&self.points)?;
        if scale == 1.0 {
            return Ok(self.clone());
        }
        let points = self
            .points
            .iter()
            .map(|p| Point::new(p.i * scale, p.q * scale))
            .collect();
        Ok(Constellation {
            points,
            labels: self.labels.clone(),
            m: self.m,
            name: self.name.clone(),
        })
    }

    /// The subset chi_i for stream `s`: all points whose label bits at the
    /// stream positions spell out `index`. Always has exactly 2^(m-k) points.
    pub fn subset(&self, s: &StreamSpec, index: u32) -> Result<Vec<Point>, ConstellationError> {
        Ok(self
            .subset_indices(s, index)?
            .into_iter()
            .map(|i| self.points[i])
            .collect())
    }

    fn subset_indices(
        &self,
        s: &StreamSpec,
        index: u32,
    ) -> Result<Vec<usize>, ConstellationError> {
        s.validate_for(self.m)?;
        let k = s.k();
        if index >= (1 << k) {
            return Err(ConstellationError::SubsetIndexOutOfRange { index, k });
        }
        Ok((0..self.size())
            .filter(|&i| s.project(self.labels[i]) == index)
            .collect())
    }

    /// The full partition {chi_i} for stream `s`, as indices into
    /// [`Constellation::points`], ordered by subset index i.
    pub fn partition_indices(&self, s: &StreamSpec) -> Result<Vec<Vec<usize>>, ConstellationError> {
        s.validate_for(self.m)?;
        let k = s.k();
        let mut subsets = vec![Vec::with_capacity(self.size() >> k); 1usize << k];
        for (i, &label) in self.labels.iter().enumerate() {
            subsets[s.project(label) as usize].push(i);
        }
        Ok(subsets)
    }

    /// Measures alpha = d_h / d_l from the geometry: d_h is half the minimum
    /// distance between points whose `hp` bits differ, d_l half the minimum
    /// distance between any two points.
    pub fn measure_alpha(&self, hp: &StreamSpec) -> Result<Alpha, ConstellationError> {
        hp.validate_for(self.m)?;
        let mut min_all = f64::INFINITY;
        let mut min_hp = f64::INFINITY;
        for a in 0..self.size() {
            for b in a + 1..self.size() {
                let d2 = self.points[a].dist_sq(self.points[b]);
                min_all = min_all.min(d2);
                if hp.project(self.labels[a]) != hp.project(self.labels[b]) {
                    min_hp = min_hp.min(d2);
                }
            }
        }
        if min_all <= 0.0 {
            return Err(ConstellationError::DegenerateGeometry);
        }
        // d_h / d_l; the halves cancel in the ratio.
        Alpha::new((min_hp / min_all).sqrt())
    }
}

/// Scale factor that brings a point set to unit average energy.
fn unit_energy_scale(points: &[Point]) -> Result<f64, ConstellationError> {
    let energy = points.iter().map(Point::norm_sq).sum::<f64>() / points.len().max(1) as f64;
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(ConstellationError::ZeroEnergy);
    }
    if (energy - 1.0).abs() <= 1e-13 {
        return Ok(1.0);
    }
    Ok(1.0 / energy.sqrt())
}

/// 2-bit Gray label for a 4-PAM coordinate in {-3,-1,1,3}: bit 0 is the sign
/// (1 = negative), bit 1 marks the outer magnitude.
fn pam_gray_label(coord: f64) -> u32 {
    let sign = u32::from(coord < 0.0);
    let outer = u32::from(coord.abs() > 2.0);
    sign | (outer << 1)
}
