//! Unit conventions.
//!
//! Internally every frequency and rate is an angular frequency in rad/ns and
//! every time is in ns (hbar = 1). Device tables quote ordinary frequencies in
//! MHz, so `X MHz` maps to `2 pi X 1e-3 rad/ns`. T1 values are reported in µs.

use std::f64::consts::TAU;

/// Planck constant in J s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Ordinary frequency in MHz to angular frequency in rad/ns.
pub fn mhz(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e-3
}

/// Angular frequency in rad/ns back to MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / (TAU * 1e-3)
}

/// Ordinary frequency in GHz to rad/ns.
pub fn ghz(f_ghz: f64) -> f64 {
    TAU * f_ghz
}

pub fn ns_to_us(t_ns: f64) -> f64 {
    t_ns * 1e-3
}

pub fn us_to_ns(t_us: f64) -> f64 {
    t_us * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mhz_roundtrip() {
        assert!((mhz(2.1) - 0.013_194_689_145_077_13).abs() < 1e-15);
        assert!((to_mhz(mhz(5011.7)) - 5011.7).abs() < 1e-9);
        assert!((ghz(5.0) - mhz(5000.0)).abs() < 1e-12);
    }
}
