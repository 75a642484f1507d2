use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{Environment, RrtError};

/// Fixed geometry of the kinematic-chain scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainGeometry {
    pub joints: usize,
    pub link_length: f64,
    /// Inner tunnel radius; the tunnel is centred at the origin.
    pub inner_radius: f64,
    /// Outer radius is `inner_radius + width · width_scale`.
    pub width_scale: f64,
    /// Base anchor distance from the tunnel centre, beyond `inner_radius`.
    pub base_offset: f64,
    /// Workspace is the box `[−h, h]²`.
    pub workspace_half: f64,
    /// Collision samples per link, endpoints included.
    pub samples_per_link: usize,
}

impl Default for ChainGeometry {
    fn default() -> Self {
        ChainGeometry {
            joints: 4,
            link_length: 0.2,
            inner_radius: 0.35,
            width_scale: 0.5,
            base_offset: 0.1,
            workspace_half: 1.0,
            samples_per_link: 16,
        }
    }
}

/// Joint positions of a planar chain: `angles[0]` is absolute, the rest
/// are relative to the previous link. Returns `angles.len() + 1` points.
pub fn chain_forward_kinematics(base: [f64; 2], link_length: f64, angles: &[f64]) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(angles.len() + 1);
    pts.push(base);
    let mut heading = 0.0;
    let mut p = base;
    for &a in angles {
        heading += a;
        p = [
            p[0] + link_length * libm::cos(heading),
            p[1] + link_length * libm::sin(heading),
        ];
        pts.push(p);
    }
    pts
}

fn wrap_angle(a: f64) -> f64 {
    let t = libm::fmod(a + PI, 2.0 * PI);
    if t < 0.0 {
        t + PI
    } else {
        t - PI
    }
}

/// Unit-cube coordinate of a joint angle.
fn angle_to_unit(a: f64) -> f64 {
    (wrap_angle(a) + PI) / (2.0 * PI)
}

/// A chain anchored at the mouth of a half-annulus tunnel.
///
/// In tunnel coordinates (tunnel rotated by `−rotation`) the walls are the
/// points of the upper half-plane outside the annulus
/// `inner_radius ≤ r ≤ outer_radius`; the lower half-plane is free. The base
/// sits at `(inner_radius + base_offset, 0)`. The start pose curls the
/// chain along the circle through the base inside the tunnel; the goal
/// pose hangs straight down, out of the tunnel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainEnv {
    pub geometry: ChainGeometry,
    pub width: f64,
    pub rotation: f64,
    base: [f64; 2],
    start: Vec<f64>,
    goal: Vec<f64>,
}

impl ChainEnv {
    pub fn new(geometry: ChainGeometry, width: f64, rotation: f64) -> Result<Self, RrtError> {
        if geometry.joints == 0 || geometry.samples_per_link < 2 || !(geometry.link_length > 0.0) {
            return Err(RrtError::Config(
                "chain needs joints, positive links and two samples per link",
            ));
        }
        if !(width > 0.0) {
            return Err(RrtError::Config("passage width must be positive"));
        }
        let rs = geometry.inner_radius + geometry.base_offset;
        let (s, c) = (libm::sin(rotation), libm::cos(rotation));
        let base = [rs * c, rs * s];
        // Each link is a chord of the circle of radius rs.
        let step = 2.0 * libm::asin((geometry.link_length / (2.0 * rs)).min(1.0));
        let mut start_angles = Vec::with_capacity(geometry.joints);
        start_angles.push(rotation + PI / 2.0 + step / 2.0);
        start_angles.extend(core::iter::repeat(step).take(geometry.joints - 1));
        let mut goal_angles = Vec::with_capacity(geometry.joints);
        goal_angles.push(rotation - PI / 2.0);
        goal_angles.extend(core::iter::repeat(0.0).take(geometry.joints - 1));
        let env = ChainEnv {
            geometry,
            width,
            rotation,
            base,
            start: start_angles.iter().map(|&a| angle_to_unit(a)).collect(),
            goal: goal_angles.iter().map(|&a| angle_to_unit(a)).collect(),
        };
        if env.in_collision(&env.start) {
            return Err(RrtError::StartInCollision);
        }
        Ok(env)
    }

    pub fn base(&self) -> [f64; 2] {
        self.base
    }

    pub fn outer_radius(&self) -> f64 {
        self.geometry.inner_radius + self.width * self.geometry.width_scale
    }

    /// Joint angles `−π + 2π u`.
    pub fn angles(q: &[f64]) -> Vec<f64> {
        q.iter().map(|&u| -PI + 2.0 * PI * u).collect()
    }

    pub fn forward_kinematics(&self, q: &[f64]) -> Vec<[f64; 2]> {
        chain_forward_kinematics(self.base, self.geometry.link_length, &Self::angles(q))
    }

    /// True if the workspace point is outside the box or inside a wall.
    pub fn point_blocked(&self, p: [f64; 2]) -> bool {
        let h = self.geometry.workspace_half;
        if p[0].abs() > h || p[1].abs() > h {
            return true;
        }
        let (s, c) = (libm::sin(self.rotation), libm::cos(self.rotation));
        let y = -s * p[0] + c * p[1];
        if y <= 0.0 {
            return false;
        }
        let r = libm::hypot(p[0], p[1]);
        r < self.geometry.inner_radius || r > self.outer_radius()
    }
}

impl Environment for ChainEnv {
    fn dim(&self) -> usize {
        self.geometry.joints
    }

    fn start(&self) -> &[f64] {
        &self.start
    }

    fn goal(&self) -> &[f64] {
        &self.goal
    }

    fn in_collision(&self, q: &[f64]) -> bool {
        let pts = self.forward_kinematics(q);
        let m = self.geometry.samples_per_link;
        pts.windows(2).any(|seg| {
            (0..m).any(|s| {
                let t = s as f64 / (m - 1) as f64;
                let p = [
                    seg[0][0] + t * (seg[1][0] - seg[0][0]),
                    seg[0][1] + t * (seg[1][1] - seg[0][1]),
                ];
                self.point_blocked(p)
            })
        })
    }
}
