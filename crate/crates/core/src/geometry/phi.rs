use serde::{Deserialize, Serialize};

use crate::quaternion::ImaginaryUnit;

/// One entry of a tabulated angle function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub unit: ImaginaryUnit,
    pub value: f64,
}

/// A continuous map `S -> [0, 1]` selecting the cut angle of each slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phi {
    Constant { value: f64 },
    /// `|K - J| / 2` for the base unit `J`.
    HalfDistance,
    /// Linear interpolation in the angle between `K` and the base unit.
    Table { entries: Vec<PhiEntry> },
}

impl Phi {
    pub fn eval(&self, base: &ImaginaryUnit, k: &ImaginaryUnit) -> f64 {
        let v = match self {
            Phi::Constant { value } => *value,
            Phi::HalfDistance => 0.5 * k.distance(base),
            Phi::Table { entries } => interpolate(entries, base, k),
        };
        v.clamp(0.0, 1.0)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Phi::Constant { .. } => true,
            Phi::HalfDistance => false,
            Phi::Table { entries } => entries.windows(2).all(|w| w[0].value == w[1].value),
        }
    }
}

fn angle_to(base: &ImaginaryUnit, k: &ImaginaryUnit) -> f64 {
    base.dot(k).clamp(-1.0, 1.0).acos()
}

fn interpolate(entries: &[PhiEntry], base: &ImaginaryUnit, k: &ImaginaryUnit) -> f64 {
    if entries.is_empty() {
        return 0.0;
    }
    let mut pts: Vec<(f64, f64)> = entries.iter().map(|e| (angle_to(base, &e.unit), e.value)).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angle"));
    let t = angle_to(base, k);
    if t <= pts[0].0 {
        return pts[0].1;
    }
    for w in pts.windows(2) {
        let ((t0, v0), (t1, v1)) = (w[0], w[1]);
        if t <= t1 {
            if t1 - t0 <= 0.0 {
                return v1;
            }
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    pts[pts.len() - 1].1
}

/// Cut direction for a slice: `pi/4 + phi pi/2`.
pub fn cut_angle(phi_value: f64) -> f64 {
    std::f64::consts::FRAC_PI_4 + phi_value * std::f64::consts::FRAC_PI_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_distance_endpoints() {
        let j = ImaginaryUnit::j();
        assert_eq!(Phi::HalfDistance.eval(&j, &j), 0.0);
        assert_eq!(Phi::HalfDistance.eval(&j, &j.neg()), 1.0);
        let v = Phi::HalfDistance.eval(&j, &ImaginaryUnit::i());
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn table_matches_half_distance_at_nodes_and_interpolates() {
        let j = ImaginaryUnit::j();
        let o = j.orthogonal();
        let entries: Vec<PhiEntry> = (0..=8)
            .map(|n| {
                let u = j.rotate_toward(&o, n as f64 * std::f64::consts::PI / 8.0);
                PhiEntry { unit: u, value: Phi::HalfDistance.eval(&j, &u) }
            })
            .collect();
        let table = Phi::Table { entries };
        for n in 0..=8 {
            let u = j.rotate_toward(&o, n as f64 * std::f64::consts::PI / 8.0);
            assert!((table.eval(&j, &u) - Phi::HalfDistance.eval(&j, &u)).abs() < 1e-12);
        }
        // halfway between nodes 0 and 1: linear in angle
        let mid = j.rotate_toward(&o, std::f64::consts::PI / 16.0);
        let expect = 0.5 * Phi::HalfDistance.eval(&j, &j.rotate_toward(&o, std::f64::consts::PI / 8.0));
        assert!((table.eval(&j, &mid) - expect).abs() < 1e-12);
    }
}
