//! Field coordinate convention: feet, home plate at the origin, `y` toward
//! center field. Fair territory is the quarter plane between the foul lines
//! `x = y` (first base side) and `x = -y` (third base side).

/// Spray angle in degrees: 0 on the right field line, 90 on the left field
/// line.
pub fn spray_angle(x: f64, y: f64) -> f64 {
    y.atan2(x).to_degrees() - 45.0
}

pub fn from_polar(distance: f64, spray_deg: f64) -> (f64, f64) {
    let theta = (spray_deg + 45.0).to_radians();
    (distance * theta.cos(), distance * theta.sin())
}

pub fn is_fair(x: f64, y: f64) -> bool {
    y >= x.abs()
}

/// Moves foul points onto the nearest foul line at the same distance from
/// home plate. Fair points are returned unchanged.
pub fn clip_to_fair(x: f64, y: f64) -> (f64, f64) {
    if is_fair(x, y) {
        return (x, y);
    }
    let d = x.hypot(y);
    let raw = y.atan2(x).to_degrees();
    let gap = |line: f64| {
        let g = (raw - line).rem_euclid(360.0);
        g.min(360.0 - g)
    };
    let target = if gap(45.0) <= gap(135.0) { 0.0 } else { 90.0 };
    from_polar(d, target)
}
