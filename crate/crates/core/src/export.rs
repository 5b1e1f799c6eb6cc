//! Triangle meshes of fundamental domains for external viewers.
//!
//! SO(3) cells are drawn in exponential coordinates: the boundary radius
//! along each direction is found by bisection on the membership test.
//! SE(2) cells are prisms in `(x, y, θ)`.

use std::io::Write;

use nalgebra::Vector3;

use crate::crystal::{Membership, Se2Domain};
use crate::domains::{CosetDomain, DoubleCosetDomain, WedgeDomain};
use crate::error::Result;
use crate::lie::{exp_so3, Rotation};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based, counter-clockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    fn push(&mut self, v: Vector3<f64>) -> usize {
        self.vertices.push([v.x, v.y, v.z]);
        self.vertices.len() - 1
    }

    pub fn write_obj(&self, mut w: impl Write) -> Result<()> {
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }

    pub fn to_obj_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_obj(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Every undirected edge is shared by exactly two faces.
    pub fn is_closed(&self) -> bool {
        let mut edges = std::collections::HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        edges.values().all(|&c| c == 2)
    }
}

/// Largest `r ≤ π` with `exp(r u)` not outside the cell.
fn boundary_radius(u: &Vector3<f64>, inside: &dyn Fn(&Rotation) -> bool) -> f64 {
    let pi = std::f64::consts::PI;
    if inside(&exp_so3(&(u * pi))) {
        return pi;
    }
    let (mut lo, mut hi) = (0.0, pi);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if inside(&exp_so3(&(u * mid))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn radial_sphere(resolution: usize, inside: &dyn Fn(&Rotation) -> bool) -> Mesh {
    let n_lat = resolution.max(2);
    let n_lon = 2 * n_lat;
    let mut mesh = Mesh::default();
    let at = |u: Vector3<f64>, mesh: &mut Mesh| {
        let r = boundary_radius(&u, inside);
        mesh.push(u * r)
    };
    let north = at(Vector3::z(), &mut mesh);
    let mut rings = Vec::with_capacity(n_lat - 1);
    for a in 1..n_lat {
        let polar = std::f64::consts::PI * a as f64 / n_lat as f64;
        let ring: Vec<usize> = (0..n_lon)
            .map(|b| {
                let az = 2.0 * std::f64::consts::PI * b as f64 / n_lon as f64;
                let u = Vector3::new(polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos());
                at(u, &mut mesh)
            })
            .collect();
        rings.push(ring);
    }
    let south = at(-Vector3::z(), &mut mesh);
    for b in 0..n_lon {
        let c = (b + 1) % n_lon;
        mesh.faces.push([north, rings[0][b], rings[0][c]]);
        for a in 0..rings.len() - 1 {
            let (p, q) = (&rings[a], &rings[a + 1]);
            mesh.faces.push([p[b], q[b], q[c]]);
            mesh.faces.push([p[b], q[c], p[c]]);
        }
        let last = &rings[rings.len() - 1];
        mesh.faces.push([last[b], south, last[c]]);
    }
    mesh
}

/// Boundary of the coset cell `F_{H\SO(3)}` in exponential coordinates.
pub fn coset_cell_mesh(d: &CosetDomain, resolution: usize) -> Mesh {
    radial_sphere(resolution, &|r| d.membership(r) != Membership::Outside)
}

/// Boundary of the double-coset cell `F_{H\SO(3)/K}`.
pub fn double_coset_cell_mesh(d: &DoubleCosetDomain, resolution: usize) -> Mesh {
    radial_sphere(resolution, &|r| d.membership(r) != Membership::Outside)
}

/// The base wedge: three flat sides through the origin and an outer cap on
/// the coset-cell boundary.
pub fn wedge_mesh(w: &WedgeDomain, resolution: usize) -> Mesh {
    let n = resolution.max(1);
    let [e0, e1, e2] = w.edge_rays();
    let cell = w.coset();
    let inside = |r: &Rotation| cell.membership(r) != Membership::Outside;
    let mut mesh = Mesh::default();
    let origin = mesh.push(Vector3::zeros());
    // triangular grid of directions over the spherical triangle
    let mut grid = vec![vec![0usize; n + 1]; n + 1];
    for a in 0..=n {
        for b in 0..=n - a {
            let c = n - a - b;
            let u = (e0 * a as f64 + e1 * b as f64 + e2 * c as f64).normalize();
            let r = boundary_radius(&u, &inside);
            grid[a][b] = mesh.push(u * r);
        }
    }
    for a in 0..n {
        for b in 0..n - a {
            mesh.faces.push([grid[a][b], grid[a + 1][b], grid[a][b + 1]]);
            if b + 1 < n - a {
                mesh.faces.push([grid[a + 1][b], grid[a + 1][b + 1], grid[a][b + 1]]);
            }
        }
    }
    // sides: edge from e_x to e_y fans back to the origin
    let side_a: Vec<usize> = (0..=n).map(|a| grid[a][0]).collect(); // e2 -> e0
    let side_b: Vec<usize> = (0..=n).map(|b| grid[0][b]).collect(); // e2 -> e1
    let side_c: Vec<usize> = (0..=n).map(|a| grid[a][n - a]).collect(); // e1 -> e0
    for k in 0..n {
        mesh.faces.push([origin, side_a[k + 1], side_a[k]]);
        mesh.faces.push([origin, side_b[k], side_b[k + 1]]);
        mesh.faces.push([origin, side_c[k], side_c[k + 1]]);
    }
    orient_outward(&mut mesh);
    mesh
}

/// Flips faces whose normal points toward the centroid. Valid for
/// star-shaped meshes around their centroid, which all ours are.
fn orient_outward(mesh: &mut Mesh) {
    let c = mesh
        .vertices
        .iter()
        .fold(Vector3::zeros(), |acc, v| acc + Vector3::from(*v))
        / mesh.vertices.len() as f64;
    let vtx = |i: usize| Vector3::from(mesh.vertices[i]);
    let flips: Vec<bool> = mesh
        .faces
        .iter()
        .map(|f| {
            let (a, b, d) = (vtx(f[0]), vtx(f[1]), vtx(f[2]));
            let normal = (b - a).cross(&(d - a));
            normal.dot(&((a + b + d) / 3.0 - c)) < 0.0
        })
        .collect();
    for (f, flip) in mesh.faces.iter_mut().zip(flips) {
        if flip {
            f.swap(1, 2);
        }
    }
}

/// Prism `polygon × [θ_min, θ_max]` with θ as the third coordinate.
pub fn se2_prism_mesh(d: &Se2Domain) -> Mesh {
    let mut mesh = Mesh::default();
    let k = d.polygon.len();
    let bottom: Vec<usize> = d
        .polygon
        .iter()
        .map(|p| mesh.push(Vector3::new(p.x, p.y, d.theta_min)))
        .collect();
    let top: Vec<usize> = d
        .polygon
        .iter()
        .map(|p| mesh.push(Vector3::new(p.x, p.y, d.theta_max)))
        .collect();
    for i in 1..k - 1 {
        mesh.faces.push([bottom[0], bottom[i + 1], bottom[i]]);
        mesh.faces.push([top[0], top[i], top[i + 1]]);
    }
    for i in 0..k {
        let j = (i + 1) % k;
        mesh.faces.push([bottom[i], bottom[j], top[j]]);
        mesh.faces.push([bottom[i], top[j], top[i]]);
    }
    mesh
}
