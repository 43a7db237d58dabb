//! SVG rendering of a scenario and its assignment.
//!
//! Meters map linearly onto a fixed-width viewport with the y axis pointing
//! up. Every coordinate is printed with two decimals so that identical
//! inputs give byte-identical documents.

use std::fmt::Write as _;

use vsnopt_core::model::{validate_plan, AssignmentPlan, Mode, Point, Scenario, Violation};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;
const LEGEND: f64 = 28.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotOptions {
    pub range_circles: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            range_circles: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeRole {
    Virtualized,
    Physical,
    Idle,
}

#[derive(Debug, thiserror::Error)]
#[error("plan is not valid for this scenario ({} violations, first: {}); run `vsnopt validate` for details", .0.len(), .0[0])]
pub struct InvalidPlan(pub Vec<Violation>);

struct Viewport {
    scale: f64,
    height_m: f64,
}

impl Viewport {
    fn new(scenario: &Scenario) -> Self {
        let span = scenario.area.width.max(scenario.area.height).max(1e-9);
        Viewport {
            scale: (CANVAS - 2.0 * MARGIN) / span,
            height_m: scenario.area.height,
        }
    }

    fn x(&self, p: &Point) -> f64 {
        MARGIN + p.x * self.scale
    }

    fn y(&self, p: &Point) -> f64 {
        MARGIN + (self.height_m - p.y) * self.scale
    }

    fn len(&self, meters: f64) -> f64 {
        meters * self.scale
    }
}

pub fn node_roles(scenario: &Scenario, plan: Option<&AssignmentPlan>) -> Vec<NodeRole> {
    scenario
        .nodes
        .iter()
        .map(|n| match plan {
            Some(p) if p.is_virtualized(n.id) => NodeRole::Virtualized,
            Some(p) if p.assignments.iter().any(|a| a.node == n.id) => NodeRole::Physical,
            _ => NodeRole::Idle,
        })
        .collect()
}

/// Renders the scenario; with a plan, also node roles and assignment edges.
/// A plan that fails validation is refused.
pub fn render_svg(
    scenario: &Scenario,
    plan: Option<&AssignmentPlan>,
    options: PlotOptions,
) -> Result<String, InvalidPlan> {
    if let Some(plan) = plan {
        let report = validate_plan(plan, scenario);
        if !report.is_ok() {
            return Err(InvalidPlan(report.violations));
        }
    }
    let vp = Viewport::new(scenario);
    let width = 2.0 * MARGIN + vp.len(scenario.area.width);
    let height = 2.0 * MARGIN + vp.len(scenario.area.height) + LEGEND;
    let roles = node_roles(scenario, plan);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect class="area" x="{MARGIN:.2}" y="{MARGIN:.2}" width="{:.2}" height="{:.2}" fill="#fafafa" stroke="#444"/>"##,
        vp.len(scenario.area.width),
        vp.len(scenario.area.height)
    );

    if options.range_circles {
        s.push_str("<g class=\"ranges\">\n");
        for n in &scenario.nodes {
            let _ = writeln!(
                s,
                r##"<circle class="range" data-node="{}" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#9ab" stroke-dasharray="3 3"/>"##,
                n.id,
                vp.x(&n.pos),
                vp.y(&n.pos),
                vp.len(n.range)
            );
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g class=\"edges\">\n");
    if let Some(plan) = plan {
        for a in plan.sorted() {
            let n = &scenario.nodes[a.node].pos;
            let t = &scenario.tasks[a.task].pos;
            let (class, color) = match a.mode {
                Mode::Ps => ("edge ps", "#1f77b4"),
                Mode::Vs => ("edge vs", "#d62728"),
            };
            let _ = writeln!(
                s,
                r#"<line class="{class}" data-task="{}" data-node="{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
                a.task,
                a.node,
                vp.x(n),
                vp.y(n),
                vp.x(t),
                vp.y(t)
            );
        }
    }
    s.push_str("</g>\n");

    s.push_str("<g class=\"nodes\">\n");
    for (n, role) in scenario.nodes.iter().zip(&roles) {
        let (cx, cy) = (vp.x(&n.pos), vp.y(&n.pos));
        match role {
            NodeRole::Virtualized => {
                let _ = writeln!(
                    s,
                    r##"<rect class="node virtualized" data-node="{}" x="{:.2}" y="{:.2}" width="10.00" height="10.00" fill="#d62728"/>"##,
                    n.id,
                    cx - 5.0,
                    cy - 5.0
                );
            }
            NodeRole::Physical => {
                let _ = writeln!(
                    s,
                    r##"<circle class="node physical" data-node="{}" cx="{cx:.2}" cy="{cy:.2}" r="5.00" fill="#1f77b4"/>"##,
                    n.id
                );
            }
            NodeRole::Idle => {
                let _ = writeln!(
                    s,
                    r##"<circle class="node idle" data-node="{}" cx="{cx:.2}" cy="{cy:.2}" r="5.00" fill="white" stroke="#777"/>"##,
                    n.id
                );
            }
        }
    }
    s.push_str("</g>\n");

    s.push_str("<g class=\"tasks\">\n");
    for t in &scenario.tasks {
        let (x, y) = (vp.x(&t.pos), vp.y(&t.pos));
        let _ = writeln!(
            s,
            r#"<polygon class="task" data-task="{}" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="black"/>"#,
            t.id,
            x,
            y - 5.0,
            x - 4.5,
            y + 4.0,
            x + 4.5,
            y + 4.0
        );
    }
    s.push_str("</g>\n");

    let ly = height - LEGEND / 2.0 + 4.0;
    let _ = writeln!(
        s,
        r#"<text class="legend" x="{MARGIN:.2}" y="{ly:.2}" font-family="sans-serif" font-size="12">square: virtualized node, filled circle: physical sensor, hollow circle: idle node, triangle: task; red edge: VS, blue edge: PS</text>"#
    );
    s.push_str("</svg>\n");
    Ok(s)
}
