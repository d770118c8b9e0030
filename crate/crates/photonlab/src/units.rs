//! Unit systems at the CLI boundary. Computation always runs in natural
//! units; SI only rescales configuration inputs and CSV outputs.

use photonlab_core::relativity::Constants;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    Natural,
    Si,
}

/// Multipliers from natural-unit values to output values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales {
    pub time: f64,
    pub length: f64,
    pub wavenumber: f64,
    /// `A` and `B`.
    pub potential: f64,
    /// `E` and `φ`.
    pub field: f64,
    pub density: f64,
    pub current: f64,
    pub helicity: f64,
    /// `∂_tρ` and the continuity residual.
    pub rate: f64,
    /// Mode amplitudes `c(k)`, which carry `√c` through the measure.
    pub amplitude: f64,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Natural => "natural",
            Units::Si => "si",
        }
    }

    pub fn from_name(s: &str) -> Option<Units> {
        match s {
            "natural" => Some(Units::Natural),
            "si" => Some(Units::Si),
            _ => None,
        }
    }

    pub fn constants(self) -> Constants {
        match self {
            Units::Natural => Constants::NATURAL,
            Units::Si => Constants::SI,
        }
    }

    /// Factor taking an input time (seconds in SI) to natural time `ct`.
    pub fn time_to_natural(self) -> f64 {
        self.constants().c
    }

    pub fn scales(self) -> Scales {
        let k = self.constants();
        let c = k.c;
        Scales {
            time: 1.0 / c,
            length: 1.0,
            wavenumber: 1.0,
            potential: (k.hbar / (k.eps0 * c)).sqrt(),
            field: (k.hbar * c / k.eps0).sqrt(),
            density: 1.0,
            current: c,
            helicity: k.hbar,
            rate: c,
            amplitude: c.sqrt(),
        }
    }
}
