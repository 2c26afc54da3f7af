//! Screen quadrants and object-centred areas of interest.

use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("screen dimensions must be positive and finite (got {width} x {height})")]
    Screen { width: f64, height: f64 },
    #[error("AoI dimensions must be positive and finite (got {width} x {height})")]
    Aoi { width: f64, height: f64 },
}

/// Screen extent in pixels plus the orientation of the y axis.
///
/// With `y_up = false` (the default) coordinates are screen coordinates with
/// y growing downwards, and the quadrant rule is evaluated on `H - y`, which
/// puts the stimulus quadrants on the visually lower half.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry", into = "RawGeometry")]
pub struct ScreenGeometry {
    width_px: f64,
    height_px: f64,
    y_up: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    #[serde(default = "default_width")]
    width_px: f64,
    #[serde(default = "default_height")]
    height_px: f64,
    #[serde(default)]
    y_up: bool,
}

fn default_width() -> f64 {
    1920.0
}

fn default_height() -> f64 {
    1080.0
}

impl TryFrom<RawGeometry> for ScreenGeometry {
    type Error = GeometryError;

    fn try_from(raw: RawGeometry) -> Result<Self, Self::Error> {
        ScreenGeometry::new(raw.width_px, raw.height_px, raw.y_up)
    }
}

impl From<ScreenGeometry> for RawGeometry {
    fn from(g: ScreenGeometry) -> Self {
        RawGeometry { width_px: g.width_px, height_px: g.height_px, y_up: g.y_up }
    }
}

impl Default for ScreenGeometry {
    fn default() -> Self {
        ScreenGeometry { width_px: 1920.0, height_px: 1080.0, y_up: false }
    }
}

impl ScreenGeometry {
    pub fn new(width_px: f64, height_px: f64, y_up: bool) -> Result<Self, GeometryError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(width_px) || !ok(height_px) {
            return Err(GeometryError::Screen { width: width_px, height: height_px });
        }
        Ok(ScreenGeometry { width_px, height_px, y_up })
    }

    pub fn width(&self) -> f64 {
        self.width_px
    }

    pub fn height(&self) -> f64 {
        self.height_px
    }

    pub fn y_up(&self) -> bool {
        self.y_up
    }

    pub fn with_y_up(self, y_up: bool) -> Self {
        ScreenGeometry { y_up, ..self }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width_px).contains(&x) && (0.0..=self.height_px).contains(&y)
    }

    /// Maps a y value between the quadrant-rule frame (y up) and this
    /// geometry's coordinate frame. The mapping is its own inverse.
    pub fn flip_y(&self, y: f64) -> f64 {
        if self.y_up {
            y
        } else {
            self.height_px - y
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Quadrant> {
        Self::ALL.get(i).copied()
    }

    /// Q3 and Q4 hold the game stimuli.
    pub fn is_stimulus(self) -> bool {
        matches!(self, Quadrant::Q3 | Quadrant::Q4)
    }

    pub fn is_left(self) -> bool {
        matches!(self, Quadrant::Q1 | Quadrant::Q3)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Quadrant::Q1 => "Q1",
            Quadrant::Q2 => "Q2",
            Quadrant::Q3 => "Q3",
            Quadrant::Q4 => "Q4",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AoiLabel {
    #[serde(rename = "Left_AoI")]
    Left,
    #[serde(rename = "Right_AoI")]
    Right,
    #[serde(rename = "Outside_AoI")]
    Outside,
}

impl AoiLabel {
    pub const ALL: [AoiLabel; 3] = [AoiLabel::Left, AoiLabel::Right, AoiLabel::Outside];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_inside(self) -> bool {
        self != AoiLabel::Outside
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AoiLabel::Left => "Left_AoI",
            AoiLabel::Right => "Right_AoI",
            AoiLabel::Outside => "Outside_AoI",
        }
    }
}

impl fmt::Display for AoiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.min_x <= x && x <= self.max_x && self.min_y <= y && y <= self.max_y
    }
}

/// A game object shown from `t_ms` onwards, with the AoI box around it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectPlacement {
    t_ms: i64,
    obj_x_px: f64,
    obj_y_px: f64,
    aoi_w_px: f64,
    aoi_h_px: f64,
}

impl ObjectPlacement {
    pub fn new(t_ms: i64, obj_x_px: f64, obj_y_px: f64, aoi_w_px: f64, aoi_h_px: f64) -> Result<Self, GeometryError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(aoi_w_px) || !ok(aoi_h_px) || !obj_x_px.is_finite() || !obj_y_px.is_finite() {
            return Err(GeometryError::Aoi { width: aoi_w_px, height: aoi_h_px });
        }
        Ok(ObjectPlacement { t_ms, obj_x_px, obj_y_px, aoi_w_px, aoi_h_px })
    }

    pub fn t_ms(&self) -> i64 {
        self.t_ms
    }

    pub fn position(&self) -> (f64, f64) {
        (self.obj_x_px, self.obj_y_px)
    }

    pub fn size(&self) -> (f64, f64) {
        (self.aoi_w_px, self.aoi_h_px)
    }

    pub(crate) fn shifted(self, offset_ms: i64) -> Self {
        ObjectPlacement { t_ms: self.t_ms - offset_ms, ..self }
    }
}

/// Returns the quadrant of an in-bounds point.
///
/// Left/right split is half-open at `W/2` (the centre line belongs to the
/// right half); upper/lower split is half-open at `H/2` in the y-up frame
/// (the centre line belongs to the lower, stimulus half).
pub fn quadrant_of(x: f64, y: f64, geometry: &ScreenGeometry) -> Quadrant {
    let y = geometry.flip_y(y);
    let left = x < geometry.width() / 2.0;
    let upper = y > geometry.height() / 2.0;
    match (left, upper) {
        (true, true) => Quadrant::Q1,
        (false, true) => Quadrant::Q2,
        (true, false) => Quadrant::Q3,
        (false, false) => Quadrant::Q4,
    }
}

pub fn aoi_bounds(placement: &ObjectPlacement) -> Rect {
    let (x, y) = placement.position();
    let (w, h) = placement.size();
    Rect { min_x: x - w / 2.0, max_x: x + w / 2.0, min_y: y - h / 2.0, max_y: y + h / 2.0 }
}

/// Classifies a gaze point against the active placement, if any.
pub fn classify_aoi(x: f64, y: f64, placement: Option<&ObjectPlacement>, geometry: &ScreenGeometry) -> AoiLabel {
    let Some(p) = placement else {
        return AoiLabel::Outside;
    };
    if !aoi_bounds(p).contains(x, y) {
        return AoiLabel::Outside;
    }
    if p.position().0 < geometry.width() / 2.0 {
        AoiLabel::Left
    } else {
        AoiLabel::Right
    }
}

/// Most recent placement with `placement.t_ms <= t_ms`. `placements` must be
/// sorted by time; among equal times the last one wins.
pub fn active_placement(placements: &[ObjectPlacement], t_ms: i64) -> Option<&ObjectPlacement> {
    let idx = placements.partition_point(|p| p.t_ms <= t_ms);
    idx.checked_sub(1).map(|i| &placements[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up() -> ScreenGeometry {
        ScreenGeometry::new(1920.0, 1080.0, true).unwrap()
    }

    fn obj(x: f64, y: f64) -> ObjectPlacement {
        ObjectPlacement::new(0, x, y, 200.0, 150.0).unwrap()
    }

    #[test]
    fn quadrants_in_y_up_frame() {
        let g = up();
        assert_eq!(quadrant_of(100.0, 900.0, &g), Quadrant::Q1);
        assert_eq!(quadrant_of(960.0, 540.0, &g), Quadrant::Q4);
        assert_eq!(quadrant_of(0.0, 0.0, &g), Quadrant::Q3);
        assert_eq!(quadrant_of(1920.0, 1080.0, &g), Quadrant::Q2);
    }

    #[test]
    fn screen_frame_puts_stimuli_at_the_bottom() {
        let g = ScreenGeometry::default();
        assert_eq!(quadrant_of(100.0, 900.0, &g), Quadrant::Q3);
        assert_eq!(quadrant_of(1800.0, 100.0, &g), Quadrant::Q2);
        // H - 540 = 540, which is still the closed lower half.
        assert_eq!(quadrant_of(960.0, 540.0, &g), Quadrant::Q4);
    }

    #[test]
    fn bounds_are_centred_and_unclipped() {
        let r = aoi_bounds(&obj(400.0, 300.0));
        assert_eq!(r, Rect { min_x: 300.0, max_x: 500.0, min_y: 225.0, max_y: 375.0 });
        let r = aoi_bounds(&ObjectPlacement::new(0, 0.0, 0.0, 100.0, 100.0).unwrap());
        assert_eq!(r, Rect { min_x: -50.0, max_x: 50.0, min_y: -50.0, max_y: 50.0 });
    }

    #[test]
    fn zero_sized_aoi_is_rejected() {
        assert!(ObjectPlacement::new(0, 1.0, 1.0, 0.0, 10.0).is_err());
        assert!(ObjectPlacement::new(0, 1.0, 1.0, 10.0, -1.0).is_err());
        assert!(ObjectPlacement::new(0, 1.0, 1.0, f64::NAN, 10.0).is_err());
    }

    #[test]
    fn aoi_examples() {
        let g = ScreenGeometry::default();
        let left = obj(400.0, 300.0);
        assert_eq!(classify_aoi(450.0, 330.0, Some(&left), &g), AoiLabel::Left);
        assert_eq!(classify_aoi(450.0, 400.0, Some(&left), &g), AoiLabel::Outside);
        let right = obj(1450.0, 300.0);
        assert_eq!(classify_aoi(1500.0, 330.0, Some(&right), &g), AoiLabel::Right);
        assert_eq!(classify_aoi(1500.0, 330.0, None, &g), AoiLabel::Outside);
        // closed edges
        assert_eq!(classify_aoi(500.0, 375.0, Some(&left), &g), AoiLabel::Left);
    }

    #[test]
    fn object_on_centre_line_is_right() {
        let g = ScreenGeometry::default();
        let p = obj(960.0, 300.0);
        assert_eq!(classify_aoi(960.0, 300.0, Some(&p), &g), AoiLabel::Right);
    }

    #[test]
    fn step_function_placement_lookup() {
        let ps = [
            ObjectPlacement::new(100, 1.0, 1.0, 1.0, 1.0).unwrap(),
            ObjectPlacement::new(200, 2.0, 2.0, 1.0, 1.0).unwrap(),
            ObjectPlacement::new(200, 3.0, 3.0, 1.0, 1.0).unwrap(),
        ];
        assert!(active_placement(&ps, 99).is_none());
        assert_eq!(active_placement(&ps, 100).unwrap().position(), (1.0, 1.0));
        assert_eq!(active_placement(&ps, 199).unwrap().position(), (1.0, 1.0));
        assert_eq!(active_placement(&ps, 200).unwrap().position(), (3.0, 3.0));
        assert_eq!(active_placement(&ps, 10_000).unwrap().position(), (3.0, 3.0));
    }

    #[test]
    fn geometry_validation() {
        assert!(ScreenGeometry::new(0.0, 1080.0, false).is_err());
        assert!(ScreenGeometry::new(1920.0, f64::INFINITY, false).is_err());
    }
}
