//! Basic geometric types shared by every module.

use serde::{Deserialize, Serialize};

/// A position in meters. `z` is the altitude above ground and must be ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite() && z.is_finite());
        debug_assert!(z >= 0.0);
        Self { x, y, z }
    }

    pub fn ground(x: f64, y: f64) -> Self {
        Self::new(x, y, 0.0)
    }

    pub fn dist(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn dist_xy(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Axis-aligned region bounding GT positions and the allowed ABS altitude
/// band `[z_min, z_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Region {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, z_min: f64, z_max: f64) -> Self {
        assert!(x_min < x_max && y_min < y_max && z_min < z_max, "region bounds must satisfy min < max");
        assert!(z_min >= 0.0, "altitude band must be non-negative");
        Self { x_min, x_max, y_min, y_max, z_min, z_max }
    }

    pub fn contains_xy(&self, p: &Point3) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.contains_xy(p) && p.z >= self.z_min && p.z <= self.z_max
    }

    /// Clamp a point into the region, including the altitude band.
    pub fn clamp(&self, p: Point3) -> Point3 {
        Point3 {
            x: p.x.clamp(self.x_min, self.x_max),
            y: p.y.clamp(self.y_min, self.y_max),
            z: p.z.clamp(self.z_min, self.z_max),
        }
    }

    /// Clamp only the horizontal coordinates.
    pub fn clamp_xy(&self, p: Point3) -> Point3 {
        Point3 { x: p.x.clamp(self.x_min, self.x_max), y: p.y.clamp(self.y_min, self.y_max), z: p.z }
    }
}

/// Axis-aligned box, used for no-fly zones and buildings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Box3 {
    pub fn contains(&self, p: &Point3) -> bool {
        p.x >= self.x_min
            && p.x <= self.x_max
            && p.y >= self.y_min
            && p.y <= self.y_max
            && p.z >= self.z_min
            && p.z <= self.z_max
    }

    pub fn contains_xy(&self, p: &Point3) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(3.0, 4.0, 12.0);
        assert_eq!(a.dist(&b), 13.0);
        assert_eq!(a.dist_xy(&b), 5.0);
    }

    #[test]
    fn region_clamp() {
        let r = Region::new(0.0, 10.0, 0.0, 10.0, 5.0, 50.0);
        let p = r.clamp(Point3::new(-1.0, 20.0, 0.0));
        assert_eq!((p.x, p.y, p.z), (0.0, 10.0, 5.0));
    }

    #[test]
    #[should_panic]
    fn region_rejects_inverted_bounds() {
        let _ = Region::new(1.0, 0.0, 0.0, 1.0, 0.0, 1.0);
    }
}
