//! Stepped thermocouple leg geometry, the thermal unit cell around it,
//! and the rim-shaped array layout.
//!
//! A leg has wide end segments (width `a`) at both junctions and a narrow
//! middle segment (width `b`). The middle segment climbs a vertical step of
//! height `h`; the climb lengthens the conduction path by `γ·h` (the film
//! climbs the riser and redescends at the junction shelf, hence the default
//! γ = 2).

use crate::error::{Error, Result};

/// The stepped two-leg thermocouple geometry. All lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermocoupleGeometry {
    /// End (junction) width `a` [m].
    pub end_width_a: f64,
    /// Middle width `b` [m], `b <= a`.
    pub middle_width_b: f64,
    /// Step height `h` between the two junctions [m].
    pub step_height_h: f64,
    /// Film thickness `t` [m].
    pub film_thickness_t: f64,
    /// Length of each end segment, per leg [m].
    pub end_segment_length: f64,
    /// Length of the middle segment before the step detour [m].
    pub middle_segment_length: f64,
    /// Dimensionless path factor γ: the step adds γ·h to the middle path.
    pub step_path_factor_gamma: f64,
}

/// One straight piece of a leg's conduction path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegSegment {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
}

impl ThermocoupleGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.middle_width_b > 0.0) || self.end_width_a < self.middle_width_b {
            return Err(Error::Validation(
                "geometry requires end_width_a ≥ middle_width_b > 0".into(),
            ));
        }
        if !(self.film_thickness_t > 0.0) {
            return Err(Error::Validation("film_thickness_t must be > 0".into()));
        }
        if self.step_height_h < 0.0 {
            return Err(Error::Validation("step_height_h must be >= 0".into()));
        }
        if !(self.end_segment_length > 0.0) || !(self.middle_segment_length > 0.0) {
            return Err(Error::Validation("segment lengths must be > 0".into()));
        }
        if self.step_path_factor_gamma < 0.0 {
            return Err(Error::Validation("step_path_factor_gamma must be >= 0".into()));
        }
        Ok(())
    }

    /// Middle-segment path length including the step detour [m].
    pub fn middle_path_length(&self) -> f64 {
        self.middle_segment_length + self.step_path_factor_gamma * self.step_height_h
    }

    /// Total conduction path length of one leg [m].
    pub fn path_length(&self) -> f64 {
        2.0 * self.end_segment_length + self.middle_path_length()
    }

    /// The three segments of one leg, hot end to cold end.
    pub fn leg_segments(&self) -> [LegSegment; 3] {
        let end = LegSegment {
            length: self.end_segment_length,
            width: self.end_width_a,
            thickness: self.film_thickness_t,
        };
        let middle = LegSegment {
            length: self.middle_path_length(),
            width: self.middle_width_b,
            thickness: self.film_thickness_t,
        };
        [end, middle, end]
    }
}

/// The repeating thermal region around one thermocouple: two legs plus
/// their share of the surrounding gap.
///
/// The cell is treated as an unfolded column stack: both legs run from the
/// hot plate to the cold plate through the gap, in parallel with the fill
/// (air or unreleased oxide) occupying the rest of the footprint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCell {
    pub geometry: ThermocoupleGeometry,
    /// Cell footprint along x [m].
    pub cell_pitch_x: f64,
    /// Cell footprint along y [m].
    pub cell_pitch_y: f64,
    /// Hot-to-cold plate spacing [m]; must cover the unfolded leg column.
    pub gap_height: f64,
    /// Conductivity of the fill sharing the gap with the legs [W/(m·K)].
    pub fill_conductivity: f64,
}

impl UnitCell {
    /// Cell with the gap height derived from the leg path length, so the
    /// leg column exactly spans hot to cold plate.
    pub fn with_derived_gap(
        geometry: ThermocoupleGeometry,
        cell_pitch_x: f64,
        cell_pitch_y: f64,
        fill_conductivity: f64,
    ) -> Self {
        UnitCell {
            geometry,
            cell_pitch_x,
            cell_pitch_y,
            gap_height: geometry.path_length(),
            fill_conductivity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !(self.fill_conductivity > 0.0) {
            return Err(Error::Validation("fill_conductivity must be > 0".into()));
        }
        if self.cell_pitch_x < self.geometry.end_width_a {
            return Err(Error::Validation(
                "cell_pitch_x must be at least end_width_a".into(),
            ));
        }
        // Two leg strips sit at pitch_y/3 and 2·pitch_y/3; they must fit
        // inside the footprint without touching.
        if self.cell_pitch_y < 3.0 * self.geometry.film_thickness_t {
            return Err(Error::Validation(
                "cell_pitch_y must be at least 3x film_thickness_t to hold both legs".into(),
            ));
        }
        if self.gap_height < self.geometry.step_height_h {
            return Err(Error::Validation(
                "gap_height must be at least step_height_h".into(),
            ));
        }
        if self.gap_height + 1e-15 < self.geometry.path_length() {
            return Err(Error::Validation(format!(
                "gap_height {:.4e} m is shorter than the unfolded leg column {:.4e} m",
                self.gap_height,
                self.geometry.path_length()
            )));
        }
        Ok(())
    }

    /// Cell footprint [m²].
    pub fn footprint(&self) -> f64 {
        self.cell_pitch_x * self.cell_pitch_y
    }

    /// Plan area taken by the two leg columns [m²].
    pub fn leg_plan_area(&self) -> f64 {
        2.0 * self.geometry.end_width_a * self.geometry.film_thickness_t
    }

    /// Plan area of the parallel fill path [m²].
    pub fn fill_area(&self) -> f64 {
        self.footprint() - self.leg_plan_area()
    }

    /// Segments of one leg column spanning the gap, hot to cold.
    ///
    /// When the gap is taller than the leg path, the extra length goes into
    /// the cold-end segment (the bond to the top plate).
    pub fn leg_column_segments(&self) -> Result<[LegSegment; 3]> {
        let [end, middle, _] = self.geometry.leg_segments();
        let cold_len = self.gap_height - end.length - middle.length;
        if cold_len < 0.0 {
            return Err(Error::Validation(
                "gap_height is shorter than the unfolded leg column".into(),
            ));
        }
        let cold = LegSegment {
            length: cold_len,
            ..end
        };
        Ok([end, middle, cold])
    }
}

/// Rim arrangement of the couples along the perimeter of a deeply etched die.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RimLayout {
    pub n_couples: usize,
    /// Spacing between adjacent couples along the rim [m].
    pub couple_pitch: f64,
    /// Width of the rim band left unetched [m].
    pub rim_band_width: f64,
    /// Die edge length [m].
    pub die_side: f64,
    /// Depth of the etch inside the rim [m].
    pub etch_depth: f64,
    /// Rows of couples per rim band; 1 is the single-row default.
    pub rows: usize,
}

/// Outcome of the rim capacity check. A violation is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RimCheck {
    Ok {
        capacity: f64,
        required: f64,
    },
    Violation {
        capacity: f64,
        required: f64,
        deficit: f64,
    },
}

impl RimCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, RimCheck::Ok { .. })
    }
}

impl RimLayout {
    pub fn validate(&self) -> Result<()> {
        if !(self.etch_depth > 0.0) {
            return Err(Error::Validation("etch_depth must be > 0".into()));
        }
        if !(self.couple_pitch > 0.0) || !(self.die_side > 0.0) {
            return Err(Error::Validation(
                "couple_pitch and die_side must be > 0".into(),
            ));
        }
        if self.rim_band_width < 0.0 || self.rim_band_width >= self.die_side / 2.0 {
            return Err(Error::Validation(
                "rim_band_width must be in [0, die_side/2)".into(),
            ));
        }
        if self.rows == 0 {
            return Err(Error::Validation("rows must be >= 1".into()));
        }
        Ok(())
    }

    /// Capacity rule: each of the four rim edges holds `rows` rows of
    /// couples over a usable length of (die_side - rim_band_width).
    pub fn check_capacity(&self) -> RimCheck {
        let capacity = 4.0 * (self.die_side - self.rim_band_width) * self.rows as f64;
        let required = self.n_couples as f64 * self.couple_pitch;
        if capacity >= required {
            RimCheck::Ok { capacity, required }
        } else {
            RimCheck::Violation {
                capacity,
                required,
                deficit: required - capacity,
            }
        }
    }
}

/// Mask catalog of couple cross-sections: end width a from 3 to 10 μm,
/// middle width b from 1 to 3 μm, all at h = 0.5 μm. Returned as
/// (a, b) pairs in meters.
pub fn mask_catalog() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for a_um in 3..=10 {
        for b_um in 1..=3 {
            out.push((a_um as f64 * 1e-6, b_um as f64 * 1e-6));
        }
    }
    out
}
