use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Axis;
use crate::scalar::Field;

/// Axis of an ideal global π/2 pulse `exp(∓iπ/4 Σ σᵃ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PulseAxis {
    #[serde(rename = "+x")]
    PlusX,
    #[serde(rename = "-x")]
    MinusX,
    #[serde(rename = "+y")]
    PlusY,
    #[serde(rename = "-y")]
    MinusY,
}

impl PulseAxis {
    pub fn axis(self) -> Axis {
        match self {
            PulseAxis::PlusX | PulseAxis::MinusX => Axis::X,
            PulseAxis::PlusY | PulseAxis::MinusY => Axis::Y,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, PulseAxis::PlusX | PulseAxis::PlusY)
    }
}

impl fmt::Display for PulseAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseAxis::PlusX => "+x",
            PulseAxis::MinusX => "-x",
            PulseAxis::PlusY => "+y",
            PulseAxis::MinusY => "-y",
        })
    }
}

impl FromStr for PulseAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+x" | "x" => Ok(PulseAxis::PlusX),
            "-x" => Ok(PulseAxis::MinusX),
            "+y" | "y" => Ok(PulseAxis::PlusY),
            "-y" => Ok(PulseAxis::MinusY),
            other => Err(Error::InvalidSequence(format!("unknown pulse axis '{other}'"))),
        }
    }
}

/// `±σᵃ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedAxis {
    pub axis: Axis,
    pub positive: bool,
}

impl SignedAxis {
    pub const fn new(axis: Axis, positive: bool) -> Self {
        Self { axis, positive }
    }

    pub fn sign<F: Field>(self) -> F {
        if self.positive {
            F::one()
        } else {
            -F::one()
        }
    }

    fn flip(self, flip: bool) -> Self {
        Self { axis: self.axis, positive: self.positive != flip }
    }
}

impl fmt::Display for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { "+" } else { "-" }, self.axis.to_string().to_uppercase())
    }
}

/// Conjugation `σ ↦ U† σ U` by a Clifford rotation, stored as the images of
/// `X`, `Y`, `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameMap([SignedAxis; 3]);

impl FrameMap {
    pub const IDENTITY: FrameMap = FrameMap([
        SignedAxis::new(Axis::X, true),
        SignedAxis::new(Axis::Y, true),
        SignedAxis::new(Axis::Z, true),
    ]);

    /// Conjugation by one pulse `R = exp(−iπ/4 σᵃ)` (or its inverse).
    pub fn pulse(p: PulseAxis) -> Self {
        use Axis::*;
        let s = SignedAxis::new;
        let plus = match p.axis() {
            X => FrameMap([s(X, true), s(Z, false), s(Y, true)]),
            Y => FrameMap([s(Z, true), s(Y, true), s(X, false)]),
            Z => unreachable!("pulses are transverse"),
        };
        if p.is_positive() {
            plus
        } else {
            plus.inverse()
        }
    }

    pub fn apply(&self, a: SignedAxis) -> SignedAxis {
        self.0[a.axis.index()].flip(!a.positive)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FrameMap) -> FrameMap {
        FrameMap([
            self.apply(other.0[0]),
            self.apply(other.0[1]),
            self.apply(other.0[2]),
        ])
    }

    pub fn inverse(&self) -> FrameMap {
        let mut out = FrameMap::IDENTITY;
        for (k, img) in self.0.iter().enumerate() {
            out.0[img.axis.index()] = SignedAxis::new(Axis::ALL[k], img.positive);
        }
        out
    }

    /// Where lab `σᶻ` points in the toggling frame.
    pub fn z_image(&self) -> SignedAxis {
        self.0[2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse<F> {
    pub offset: F,
    pub axis: PulseAxis,
}

/// Segment of the cycle between pulses, labelled by the image of lab `σᶻ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame<F> {
    pub duration: F,
    pub z: SignedAxis,
}

/// A periodic schedule of ideal global π/2 pulses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSequence<F> {
    pub name: String,
    pub cycle_time: F,
    pub pulses: Vec<Pulse<F>>,
}

fn check_anisotropy<F: Field>(anisotropy: &F, cycle_time: &F) -> Result<()> {
    if !(*anisotropy >= F::zero() && *anisotropy < F::two()) {
        return Err(Error::AnisotropyOutOfRange(anisotropy.to_string()));
    }
    if !(*cycle_time > F::zero()) {
        return Err(Error::InvalidSequence("cycle time must be positive".into()));
    }
    Ok(())
}

/// `(τ₁, τ)` with `τ₁ = t_c/2 · (2−Δ)/(2+Δ)` and `τ = t_c/divisor · Δ/(2+Δ)`.
fn delays<F: Field>(anisotropy: &F, cycle_time: &F, divisor: F) -> (F, F) {
    let two = F::two();
    let denom = two.clone() + anisotropy.clone();
    let tau1 = cycle_time.clone() / two.clone() * (two - anisotropy.clone()) / denom.clone();
    let tau = cycle_time.clone() / divisor * anisotropy.clone() / denom;
    (tau1, tau)
}

fn build<F: Field>(name: &str, cycle_time: F, start: F, steps: &[(usize, PulseAxis)], tau: F) -> PulseSequence<F> {
    let mut offset = start;
    let mut pulses = Vec::with_capacity(steps.len());
    for (k, &(units, axis)) in steps.iter().enumerate() {
        if k > 0 {
            for _ in 0..units {
                offset = offset + tau.clone();
            }
        }
        pulses.push(Pulse { offset: offset.clone(), axis });
    }
    PulseSequence { name: name.to_string(), cycle_time, pulses }
}

/// WAHUHA cycle with frames `Z(τ₁) Y(τ) X(2τ) Y(τ) Z(τ₁)`.
pub fn wahuha_sequence<F: Field>(anisotropy: F, cycle_time: F) -> Result<PulseSequence<F>> {
    check_anisotropy(&anisotropy, &cycle_time)?;
    let (tau1, tau) = delays(&anisotropy, &cycle_time, F::two());
    use PulseAxis::*;
    Ok(build("wahuha", cycle_time, tau1, &[(0, PlusX), (1, MinusY), (2, PlusY), (1, MinusX)], tau))
}

/// Reflection-symmetric cycle with frames
/// `Z(τ₁) Y(τ) X(τ) −Y(τ) −X(2τ) −Y(τ) X(τ) Y(τ) Z(τ₁)`.
pub fn modified_sequence<F: Field>(anisotropy: F, cycle_time: F) -> Result<PulseSequence<F>> {
    check_anisotropy(&anisotropy, &cycle_time)?;
    let four = F::two() * F::two();
    let (tau1, tau) = delays(&anisotropy, &cycle_time, four);
    use PulseAxis::*;
    Ok(build(
        "modified",
        cycle_time,
        tau1,
        &[
            (0, PlusX),
            (1, MinusY),
            (1, MinusY),
            (1, MinusY),
            (2, PlusY),
            (1, PlusY),
            (1, PlusY),
            (1, MinusX),
        ],
        tau,
    ))
}

impl<F: Field> PulseSequence<F> {
    /// Offsets must be non-decreasing within `[0, t_c]` and the net rotation
    /// must be the identity.
    pub fn validate(&self) -> Result<()> {
        if !(self.cycle_time > F::zero()) {
            return Err(Error::InvalidSequence("cycle time must be positive".into()));
        }
        let mut prev = F::zero();
        for p in &self.pulses {
            if p.offset < prev || p.offset > self.cycle_time {
                return Err(Error::InvalidSequence(format!(
                    "pulse offsets must be non-decreasing within [0, t_c] (got {})",
                    p.offset
                )));
            }
            prev = p.offset.clone();
        }
        if self.net_rotation() != FrameMap::IDENTITY {
            return Err(Error::InvalidSequence("pulses do not compose to the identity".into()));
        }
        Ok(())
    }

    pub fn net_rotation(&self) -> FrameMap {
        self.pulses.iter().fold(FrameMap::IDENTITY, |m, p| m.compose(&FrameMap::pulse(p.axis)))
    }

    /// Toggling-frame schedule; one more frame than pulses. Zero-length
    /// frames are kept.
    pub fn frames(&self) -> Vec<Frame<F>> {
        let mut frames = Vec::with_capacity(self.pulses.len() + 1);
        let mut map = FrameMap::IDENTITY;
        let mut last = F::zero();
        for p in &self.pulses {
            frames.push(Frame { duration: p.offset.clone() - last, z: map.z_image() });
            last = p.offset.clone();
            map = map.compose(&FrameMap::pulse(p.axis));
        }
        frames.push(Frame { duration: self.cycle_time.clone() - last, z: map.z_image() });
        frames
    }

    /// Same pulses on a cycle stretched by `factor`.
    pub fn scaled(&self, factor: F) -> Self {
        Self {
            name: self.name.clone(),
            cycle_time: self.cycle_time.clone() * factor.clone(),
            pulses: self
                .pulses
                .iter()
                .map(|p| Pulse { offset: p.offset.clone() * factor.clone(), axis: p.axis })
                .collect(),
        }
    }

    /// Whether frame `k` equals frame `n − k` in axis and duration.
    pub fn is_reflection_symmetric(&self) -> bool {
        let f = self.frames();
        let n = f.len();
        (0..n / 2).all(|k| f[k] == f[n - 1 - k])
    }
}
