//! Deterministic SVG rendering of scenes: polygon outline, translucent cone
//! wedges, arrangement cells, witness markers. Rendering is the only place
//! rationals are approximated; coordinates are emitted as decimals with 9
//! significant digits and are never fed back into the geometry.

use std::fmt::Write as _;

use loclab::arrangement::{collect_lines, enumerate_cells, Workers};
use loclab::geom::{Point, Scalar};
use loclab::model::Guard;

use crate::scene::Scene;

#[derive(Debug)]
pub enum RenderError {
    ViewportViolation(String),
    BadLayer(String),
    Arrangement(String),
}

impl std::fmt::Display for RenderError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RenderError::ViewportViolation(e) => write!(f, "viewport violation: {e}"),
            RenderError::BadLayer(l) => write!(f, "unknown layer {l:?}"),
            RenderError::Arrangement(e) => write!(f, "cell enumeration failed: {e}"),
        }
    }
}

impl std::error::Error for RenderError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Polygon,
    Cones,
    Cells,
    Witnesses,
}

impl Layer {
    pub fn parse(s: &str) -> Result<Layer, RenderError> {
        match s {
            "polygon" => Ok(Layer::Polygon),
            "cones" => Ok(Layer::Cones),
            "cells" => Ok(Layer::Cells),
            "witnesses" => Ok(Layer::Witnesses),
            other => Err(RenderError::BadLayer(other.to_string())),
        }
    }
}

/// Rational viewport; must contain the polygon.
#[derive(Debug, Clone)]
pub struct Viewport {
    pub x_min: Scalar,
    pub y_min: Scalar,
    pub x_max: Scalar,
    pub y_max: Scalar,
}

impl Viewport {
    /// Polygon bounding box expanded by a tenth of its larger extent (at
    /// least 1) on every side.
    pub fn around(scene: &Scene) -> Viewport {
        let vs = scene.polygon.vertices();
        let mut x_min = vs[0].x.clone();
        let mut x_max = vs[0].x.clone();
        let mut y_min = vs[0].y.clone();
        let mut y_max = vs[0].y.clone();
        for v in vs {
            x_min = x_min.min(v.x.clone());
            x_max = x_max.max(v.x.clone());
            y_min = y_min.min(v.y.clone());
            y_max = y_max.max(v.y.clone());
        }
        let extent = (&x_max - &x_min).max(&y_max - &y_min);
        let margin = (extent / Scalar::from_int(10)).max(Scalar::one());
        Viewport {
            x_min: &x_min - &margin,
            y_min: &y_min - &margin,
            x_max: &x_max + &margin,
            y_max: &y_max + &margin,
        }
    }

    fn contains(&self, p: &Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

#[derive(Debug, Clone, Default)]
pub struct WitnessMarkers {
    pub points: Vec<Point>,
}

/// Format with 9 significant digits, trailing zeros trimmed.
fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 17) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

struct Canvas {
    vp: Viewport,
    y_top: f64,
}

impl Canvas {
    fn map(&self, p: &Point) -> (String, String) {
        let x = p.x.to_f64_lossy() - self.vp.x_min.to_f64_lossy();
        let y = self.y_top - (p.y.to_f64_lossy() - self.vp.y_min.to_f64_lossy());
        (sig(x), sig(y))
    }
}

/// Render the scene to SVG bytes; byte-identical output for identical input.
pub fn render_svg(
    scene: &Scene,
    viewport: Option<Viewport>,
    layers: &[Layer],
    witnesses: &WitnessMarkers,
) -> Result<Vec<u8>, RenderError> {
    let vp = viewport.unwrap_or_else(|| Viewport::around(scene));
    for v in scene.polygon.vertices() {
        if !vp.contains(v) {
            return Err(RenderError::ViewportViolation(format!(
                "polygon vertex {v:?} lies outside the viewport"
            )));
        }
    }
    let width = (&vp.x_max - &vp.x_min).to_f64_lossy();
    let height = (&vp.y_max - &vp.y_min).to_f64_lossy();
    let canvas = Canvas {
        y_top: height,
        vp: vp.clone(),
    };
    let stroke = (width.max(height) / 400.0).max(1e-6);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}">"#,
        sig(width),
        sig(height)
    );

    for layer in layers {
        match layer {
            Layer::Cones => {
                for g in &scene.guards {
                    let _ = writeln!(svg, "{}", cone_wedge(g, &canvas, stroke));
                }
            }
            Layer::Polygon => {
                let mut d = String::new();
                for (i, v) in scene.polygon.vertices().iter().enumerate() {
                    let (x, y) = canvas.map(v);
                    let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, x, y);
                }
                d.push('Z');
                let _ = writeln!(
                    svg,
                    r#"<path class="polygon" d="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
                    d.trim_end(),
                    sig(stroke * 2.0)
                );
            }
            Layer::Cells => {
                let lines = collect_lines(&scene.polygon, &scene.guards);
                let cells = enumerate_cells(&lines, Workers(1))
                    .map_err(|e| RenderError::Arrangement(e.to_string()))?;
                for l in lines.lines() {
                    if let Some(seg) = clip_line(l, &vp) {
                        let (x1, y1) = canvas.map(&seg.0);
                        let (x2, y2) = canvas.map(&seg.1);
                        let _ = writeln!(
                            svg,
                            r##"<line class="cell-line" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#999" stroke-width="{}"/>"##,
                            sig(stroke * 0.5)
                        );
                    }
                }
                for cell in &cells {
                    if vp.contains(&cell.representative) {
                        let (cx, cy) = canvas.map(&cell.representative);
                        let _ = writeln!(
                            svg,
                            r##"<circle class="cell-rep" cx="{cx}" cy="{cy}" r="{}" fill="#444"/>"##,
                            sig(stroke * 1.5)
                        );
                    }
                }
            }
            Layer::Witnesses => {
                for pair in witnesses.points.chunks(2) {
                    if pair.len() == 2 {
                        let (x1, y1) = canvas.map(&pair[0]);
                        let (x2, y2) = canvas.map(&pair[1]);
                        let _ = writeln!(
                            svg,
                            r#"<line class="witness-link" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="red" stroke-width="{}" stroke-dasharray="{} {}"/>"#,
                            sig(stroke),
                            sig(stroke * 3.0),
                            sig(stroke * 3.0)
                        );
                    }
                }
                for (i, p) in witnesses.points.iter().enumerate() {
                    let (cx, cy) = canvas.map(p);
                    let shape = if i % 2 == 0 {
                        format!(
                            r#"<circle class="witness" cx="{cx}" cy="{cy}" r="{}" fill="red"/>"#,
                            sig(stroke * 3.0)
                        )
                    } else {
                        let r = stroke * 3.0;
                        format!(
                            r#"<rect class="witness" x="{}" y="{}" width="{}" height="{}" fill="blue"/>"#,
                            sig(cx.parse::<f64>().unwrap_or(0.0) - r),
                            sig(cy.parse::<f64>().unwrap_or(0.0) - r),
                            sig(2.0 * r),
                            sig(2.0 * r)
                        )
                    };
                    let _ = writeln!(svg, "{shape}");
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg.into_bytes())
}

/// Translucent wedge approximating a guard's cone out to beyond the
/// viewport; wide sectors get intermediate far points so the polygon hull
/// wraps the full angle.
fn cone_wedge(g: &Guard, canvas: &Canvas, stroke: f64) -> String {
    let apex = g.apex();
    let ax = apex.x.to_f64_lossy();
    let ay = apex.y.to_f64_lossy();
    let w = (&canvas.vp.x_max - &canvas.vp.x_min).to_f64_lossy();
    let h = (&canvas.vp.y_max - &canvas.vp.y_min).to_f64_lossy();
    // Far enough that the wedge boundary leaves any viewport that contains
    // or neighbors the apex.
    let vx = canvas.vp.x_min.to_f64_lossy();
    let vy = canvas.vp.y_min.to_f64_lossy();
    let apex_offset = ((ax - vx).abs() + (ay - vy).abs()).max(1.0);
    let radius = 2.0 * (w + h) + 2.0 * apex_offset;

    let t1 = g.d1().dy().to_f64_lossy().atan2(g.d1().dx().to_f64_lossy());
    let t2 = g.d2().dy().to_f64_lossy().atan2(g.d2().dx().to_f64_lossy());
    let mut sweep = t2 - t1;
    while sweep <= 0.0 {
        sweep += std::f64::consts::TAU;
    }
    let steps = (sweep / (std::f64::consts::PI / 2.0)).ceil().max(1.0) as usize;
    let mut pts: Vec<(f64, f64)> = vec![(ax, ay)];
    for j in 0..=steps {
        let t = t1 + sweep * (j as f64) / (steps as f64);
        pts.push((ax + radius * t.cos(), ay + radius * t.sin()));
    }
    let d: String = pts
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let sx = sig(x - canvas.vp.x_min.to_f64_lossy());
            let sy = sig(canvas.y_top - (y - canvas.vp.y_min.to_f64_lossy()));
            format!("{}{} {} ", if i == 0 { "M" } else { "L" }, sx, sy)
        })
        .collect();
    format!(
        r##"<path class="cone" data-key="{}" d="{}Z" fill="#2266cc" fill-opacity="0.15" stroke="#2266cc" stroke-width="{}"/>"##,
        g.key(),
        d,
        sig(stroke)
    )
}

/// Clip an infinite line to the viewport rectangle; None if it misses.
fn clip_line(line: &loclab::geom::Line, vp: &Viewport) -> Option<(Point, Point)> {
    use loclab::geom::{Line as L, LineIntersection};
    let corners = [
        Point::new(vp.x_min.clone(), vp.y_min.clone()),
        Point::new(vp.x_max.clone(), vp.y_min.clone()),
        Point::new(vp.x_max.clone(), vp.y_max.clone()),
        Point::new(vp.x_min.clone(), vp.y_max.clone()),
    ];
    let mut hits: Vec<Point> = Vec::new();
    for i in 0..4 {
        let side = L::through(&corners[i], &corners[(i + 1) % 4]);
        if let LineIntersection::Point(p) = line.intersection(&side) {
            if vp.contains(&p) && !hits.contains(&p) {
                hits.push(p);
            }
        }
    }
    if hits.len() >= 2 {
        Some((hits[0].clone(), hits[1].clone()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    fn square_scene() -> Scene {
        parse_scene(
            r#"{
            "polygon": [["0","0"],["1","0"],["1","1"],["0","1"]],
            "guards": [
                {"apex":["0","0"],"d1":["1","0"],"d2":["0","1"],"reflex":false,"key":"k1"},
                {"apex":["1","1"],"d1":["-1","0"],"d2":["0","-1"],"reflex":false,"key":"k2"}
            ]
        }"#,
        )
        .unwrap()
    }

    #[test]
    fn polygon_layer_has_one_path() {
        let scene = square_scene();
        let svg = render_svg(&scene, None, &[Layer::Polygon], &WitnessMarkers::default()).unwrap();
        let text = String::from_utf8(svg).unwrap();
        assert_eq!(text.matches("class=\"polygon\"").count(), 1);
    }

    #[test]
    fn cone_layer_has_one_wedge_per_guard() {
        let scene = square_scene();
        let svg = render_svg(
            &scene,
            None,
            &[Layer::Cones, Layer::Polygon],
            &WitnessMarkers::default(),
        )
        .unwrap();
        let text = String::from_utf8(svg).unwrap();
        assert_eq!(text.matches("class=\"cone\"").count(), 2);
    }

    #[test]
    fn rendering_is_deterministic() {
        let scene = square_scene();
        let layers = [Layer::Polygon, Layer::Cones, Layer::Cells];
        let a = render_svg(&scene, None, &layers, &WitnessMarkers::default()).unwrap();
        let b = render_svg(&scene, None, &layers, &WitnessMarkers::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn viewport_must_contain_polygon() {
        let scene = square_scene();
        let vp = Viewport {
            x_min: Scalar::from_int(2),
            y_min: Scalar::from_int(2),
            x_max: Scalar::from_int(3),
            y_max: Scalar::from_int(3),
        };
        assert!(matches!(
            render_svg(
                &scene,
                Some(vp),
                &[Layer::Polygon],
                &WitnessMarkers::default()
            ),
            Err(RenderError::ViewportViolation(_))
        ));
    }

    #[test]
    fn witness_pair_renders_markers_and_link() {
        let scene = square_scene();
        let witnesses = WitnessMarkers {
            points: vec![loclab::geom::pt(0, 0), loclab::geom::pt(1, 0)],
        };
        let svg = render_svg(&scene, None, &[Layer::Witnesses], &witnesses).unwrap();
        let text = String::from_utf8(svg).unwrap();
        assert_eq!(text.matches("class=\"witness\"").count(), 2);
        assert_eq!(text.matches("class=\"witness-link\"").count(), 1);
    }
}
