//! Imperial ↔ SI conversions used by the handbook correlations.
//!
//! Every unit maps to its SI base through one constant factor; a conversion
//! is allowed only between units of the same physical dimension.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const FOOT_IN_M: f64 = 0.3048;
pub const INCH_IN_M: f64 = 0.0254;
pub const MPH_IN_M_PER_S: f64 = 0.44704;
pub const ATM_IN_PA: f64 = 101_325.0;
pub const POUND_FORCE_IN_N: f64 = 4.448_221_615_260_5;
/// 1 W/in² in W/m² (1/0.0254²).
pub const W_PER_IN2_IN_W_PER_M2: f64 = 1.0 / (INCH_IN_M * INCH_IN_M);
/// 1 lb/ft in N/m.
pub const LB_PER_FT_IN_N_PER_M: f64 = POUND_FORCE_IN_N / FOOT_IN_M;
/// 1 lb/ft² in Pa.
pub const LB_PER_FT2_IN_PA: f64 = POUND_FORCE_IN_N / (FOOT_IN_M * FOOT_IN_M);
/// Standard gravity (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.80665;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Atm,
    Pascal,
    FootPerSecond,
    MilePerHour,
    MeterPerSecond,
    Inch,
    Foot,
    Meter,
    PoundPerFoot,
    NewtonPerMeter,
    PoundPerSquareFoot,
    WattPerSquareInch,
    WattPerSquareMeter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Pressure,
    Speed,
    Length,
    LineLoad,
    HeatFlux,
}

impl Unit {
    fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            Atm | Pascal | PoundPerSquareFoot => Dimension::Pressure,
            FootPerSecond | MilePerHour | MeterPerSecond => Dimension::Speed,
            Inch | Foot | Meter => Dimension::Length,
            PoundPerFoot | NewtonPerMeter => Dimension::LineLoad,
            WattPerSquareInch | WattPerSquareMeter => Dimension::HeatFlux,
        }
    }

    fn to_si(self) -> f64 {
        use Unit::*;
        match self {
            Atm => ATM_IN_PA,
            PoundPerSquareFoot => LB_PER_FT2_IN_PA,
            FootPerSecond => FOOT_IN_M,
            MilePerHour => MPH_IN_M_PER_S,
            Inch => INCH_IN_M,
            Foot => FOOT_IN_M,
            PoundPerFoot => LB_PER_FT_IN_N_PER_M,
            WattPerSquareInch => W_PER_IN2_IN_W_PER_M2,
            Pascal | MeterPerSecond | Meter | NewtonPerMeter | WattPerSquareMeter => 1.0,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Unit::*;
        let s = match self {
            Atm => "atm",
            Pascal => "Pa",
            FootPerSecond => "ft/s",
            MilePerHour => "mph",
            MeterPerSecond => "m/s",
            Inch => "in",
            Foot => "ft",
            Meter => "m",
            PoundPerFoot => "lb/ft",
            NewtonPerMeter => "N/m",
            PoundPerSquareFoot => "lb/ft^2",
            WattPerSquareInch => "W/in^2",
            WattPerSquareMeter => "W/m^2",
        };
        f.write_str(s)
    }
}

/// Converts `value` from one unit to another of the same dimension.
pub fn convert<T: Real>(value: T, from: Unit, to: Unit) -> Result<T> {
    if from.dimension() != to.dimension() {
        return Err(Error::UnsupportedConversion {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * T::lit(from.to_si() / to.to_si()))
}

/// ft/s → mph.
#[inline]
pub fn fps_to_mph<T: Real>(v: T) -> T {
    v * T::lit(FOOT_IN_M / MPH_IN_M_PER_S)
}

/// m → in.
#[inline]
pub fn m_to_in<T: Real>(d: T) -> T {
    d / T::lit(INCH_IN_M)
}
