//! Unit conversion helpers.
//!
//! Everything inside the library is SI (m, K, W, Ω, V). Config files and
//! reports use the mixed units common in thermoelectric device work; the
//! exact conversion factors live here.

/// Micrometers to meters.
pub const UM: f64 = 1e-6;
/// Millimeters to meters.
pub const MM: f64 = 1e-3;
/// Square centimeters to square meters.
pub const CM2: f64 = 1e-4;

/// °C to K.
pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + 273.15
}

/// K to °C.
pub fn kelvin_to_celsius(k: f64) -> f64 {
    k - 273.15
}

/// μV/K to V/K.
pub fn microvolt_per_kelvin(v: f64) -> f64 {
    v * 1e-6
}

/// mΩ·cm to Ω·m (1 mΩ·cm = 1e-3 Ω · 1e-2 m = 1e-5 Ω·m).
pub fn milliohm_cm(v: f64) -> f64 {
    v * 1e-5
}

/// Ω·μm² to Ω·m².
pub fn ohm_um2(v: f64) -> f64 {
    v * 1e-12
}

/// V/(K·m²) expressed as mV/(K·cm²).
pub fn volts_per_k_m2_to_mv_per_k_cm2(v: f64) -> f64 {
    // 1 V/K/m² = 1e3 mV/K / 1e4 cm² = 0.1 mV/K/cm²
    v * 0.1
}
