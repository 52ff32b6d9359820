use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::report::max_pairwise_distance;
use super::{add, cross, dot, norm, scale, sub, GeometricReport};

/// Closed, oriented, manifold triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    edge_count: usize,
    components: usize,
}

impl TriMesh {
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mesh vertices"));
        }
        let nv = vertices.len();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * faces.len());
        for (f, tri) in faces.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("face {f} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("face {f} repeats a vertex")));
            }
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                if directed.insert((a, b), f).is_some() {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({a}, {b}) used twice with the same orientation (non-orientable or non-manifold)"
                    )));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::InvalidMesh(format!("edge ({a}, {b}) is on the boundary (mesh not closed)")));
            }
        }
        // each vertex star must be a single fan
        let mut link: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for tri in &faces {
            for e in 0..3 {
                link[tri[e]].push((tri[(e + 1) % 3], tri[(e + 2) % 3]));
            }
        }
        for (v, edges) in link.iter().enumerate() {
            if edges.is_empty() {
                return Err(Error::InvalidMesh(format!("vertex {v} belongs to no face")));
            }
            let next: HashMap<usize, usize> = edges.iter().copied().collect();
            let start = edges[0].0;
            let mut cur = start;
            let mut steps = 0;
            loop {
                cur = next[&cur];
                steps += 1;
                if cur == start || steps > edges.len() {
                    break;
                }
            }
            if steps != edges.len() {
                return Err(Error::InvalidMesh(format!("vertex {v} is non-manifold")));
            }
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for tri in &faces {
            for e in 0..2 {
                let (a, b) = (find(&mut parent, tri[e]), find(&mut parent, tri[e + 1]));
                parent[a] = b;
            }
        }
        let components = (0..nv).filter(|&v| find(&mut parent, v) == v).count();
        Ok(Self { edge_count: directed.len() / 2, vertices, faces, components })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count as i64 + self.faces.len() as i64
    }

    /// Total genus over all connected components.
    pub fn genus(&self) -> i64 {
        self.components as i64 - self.euler_characteristic() / 2
    }

    /// Subdivided icosahedron projected to the unit sphere.
    pub fn icosphere(subdivisions: usize) -> Self {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut verts: Vec<[f64; 3]> = [
            [-1.0, t, 0.0],
            [1.0, t, 0.0],
            [-1.0, -t, 0.0],
            [1.0, -t, 0.0],
            [0.0, -1.0, t],
            [0.0, 1.0, t],
            [0.0, -1.0, -t],
            [0.0, 1.0, -t],
            [t, 0.0, -1.0],
            [t, 0.0, 1.0],
            [-t, 0.0, -1.0],
            [-t, 0.0, 1.0],
        ]
        .iter()
        .map(|v| scale(*v, 1.0 / norm(*v)))
        .collect();
        let mut faces: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..subdivisions {
            let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
            let mut mid = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
                *midpoint.entry((a.min(b), a.max(b))).or_insert_with(|| {
                    let m = add(verts[a], verts[b]);
                    verts.push(scale(m, 1.0 / norm(m)));
                    verts.len() - 1
                })
            };
            let mut next = Vec::with_capacity(faces.len() * 4);
            for [a, b, c] in faces {
                let ab = mid(a, b, &mut verts);
                let bc = mid(b, c, &mut verts);
                let ca = mid(c, a, &mut verts);
                next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            faces = next;
        }
        Self::new(verts, faces).expect("icosphere is a closed manifold")
    }

    /// Torus of revolution about the z axis with tube radius `minor`.
    pub fn torus(major: f64, minor: f64, n_major: usize, n_minor: usize) -> Result<Self> {
        if !(major > minor && minor > 0.0) || n_major < 3 || n_minor < 3 {
            return Err(Error::InvalidInput("torus needs major > minor > 0 and at least 3 segments".into()));
        }
        let mut verts = Vec::with_capacity(n_major * n_minor);
        for i in 0..n_major {
            let u = 2.0 * PI * i as f64 / n_major as f64;
            for j in 0..n_minor {
                let v = 2.0 * PI * j as f64 / n_minor as f64;
                let r = major + minor * v.cos();
                verts.push([r * u.cos(), r * u.sin(), minor * v.sin()]);
            }
        }
        let idx = |i: usize, j: usize| (i % n_major) * n_minor + (j % n_minor);
        let mut faces = Vec::with_capacity(2 * n_major * n_minor);
        for i in 0..n_major {
            for j in 0..n_minor {
                let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
        Self::new(verts, faces)
    }
}

/// Per-vertex discrete curvatures.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshCurvatures {
    /// Mean curvature (sum of principal curvatures) from the cotangent
    /// Laplacian of the embedding.
    pub mean: Vec<f64>,
    /// Angle deficit divided by the vertex area.
    pub gauss: Vec<f64>,
    pub angle_deficit: Vec<f64>,
    /// Mixed Voronoi area per vertex.
    pub area: Vec<f64>,
}

pub fn mesh_curvatures(m: &TriMesh) -> MeshCurvatures {
    let n = m.vertices.len();
    let mut angle_sum = vec![0.0; n];
    let mut area = vec![0.0; n];
    let mut laplace = vec![[0.0; 3]; n];
    let mut normal = vec![[0.0; 3]; n];
    for tri in &m.faces {
        let p = [m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]];
        let fnormal = cross(sub(p[1], p[0]), sub(p[2], p[0]));
        let tri_area = 0.5 * norm(fnormal);
        let mut angles = [0.0; 3];
        let mut cots = [0.0; 3];
        for c in 0..3 {
            let u = sub(p[(c + 1) % 3], p[c]);
            let v = sub(p[(c + 2) % 3], p[c]);
            let cr = norm(cross(u, v));
            angles[c] = cr.atan2(dot(u, v));
            cots[c] = dot(u, v) / cr;
        }
        let obtuse = angles.iter().any(|a| *a > PI / 2.0);
        for c in 0..3 {
            let vi = tri[c];
            angle_sum[vi] += angles[c];
            normal[vi] = add(normal[vi], fnormal);
            // edge opposite corner c joins the other two vertices
            let (a, b) = ((c + 1) % 3, (c + 2) % 3);
            let w = 0.5 * cots[c];
            let d = sub(p[b], p[a]);
            laplace[tri[a]] = add(laplace[tri[a]], scale(d, w));
            laplace[tri[b]] = add(laplace[tri[b]], scale(d, -w));
            if obtuse {
                area[vi] += tri_area / 3.0;
            } else {
                let e1 = sub(p[a], p[c]);
                let e2 = sub(p[b], p[c]);
                area[vi] += (dot(e1, e1) * cots[b] + dot(e2, e2) * cots[a]) / 8.0;
            }
        }
    }
    let mut mean = vec![0.0; n];
    let mut gauss = vec![0.0; n];
    let mut angle_deficit = vec![0.0; n];
    for v in 0..n {
        angle_deficit[v] = 2.0 * PI - angle_sum[v];
        gauss[v] = angle_deficit[v] / area[v];
        let hn = scale(laplace[v], 1.0 / area[v]);
        let nv = scale(normal[v], 1.0 / norm(normal[v]));
        // Δx = −H ν with ν outward
        mean[v] = -dot(hn, nv);
    }
    MeshCurvatures { mean, gauss, angle_deficit, area }
}

pub fn mesh_report(m: &TriMesh) -> GeometricReport {
    let curv = mesh_curvatures(m);
    let mut perimeter = 0.0;
    let mut volume = 0.0;
    let mut moment = [0.0; 3];
    for tri in &m.faces {
        let p = [m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]];
        perimeter += 0.5 * norm(cross(sub(p[1], p[0]), sub(p[2], p[0])));
        let tet = dot(p[0], cross(p[1], p[2])) / 6.0;
        volume += tet;
        let centroid = scale(add(add(p[0], p[1]), p[2]), 0.25);
        moment = add(moment, scale(centroid, tet));
    }
    let total_area: f64 = curv.area.iter().sum();
    let hbar = curv.mean.iter().zip(&curv.area).map(|(h, a)| h * a).sum::<f64>() / total_area;
    let osc = curv.mean.iter().zip(&curv.area).map(|(h, a)| (h - hbar).powi(2) * a).sum();
    let mean_curvature_sq: f64 = curv.mean.iter().zip(&curv.area).map(|(h, a)| h * h * a).sum();
    let total_gauss_curvature: f64 = curv.angle_deficit.iter().sum();
    let traceless_energy = 0.5 * mean_curvature_sq - 2.0 * total_gauss_curvature;
    GeometricReport {
        perimeter,
        volume,
        volume_divergence: volume,
        hbar,
        osc,
        traceless_energy,
        willmore: 0.25 * mean_curvature_sq,
        mean_curvature_sq,
        total_gauss_curvature,
        barycenter: scale(moment, 1.0 / volume),
        diameter: max_pairwise_distance(&m.vertices),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_topology() {
        let v = vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let f = vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ];
        let m = TriMesh::new(v, f).unwrap();
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.genus(), 0);
        let r = mesh_report(&m);
        assert!((r.volume - 4.0 / 3.0).abs() < 1e-14);
        assert!((r.total_gauss_curvature - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn invalid_meshes() {
        let v = vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let open = TriMesh::new(v.clone(), vec![[0, 1, 2], [0, 2, 3]]);
        assert!(matches!(open, Err(Error::InvalidMesh(_))));
        let flipped = TriMesh::new(v, vec![[0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 3]]);
        assert!(matches!(flipped, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn gauss_bonnet() {
        let ico = TriMesh::icosphere(4);
        assert_eq!(ico.genus(), 0);
        let total: f64 = mesh_curvatures(&ico).angle_deficit.iter().sum();
        assert!((total - 4.0 * PI).abs() < 1e-9);
        let r = mesh_report(&ico);
        // inscribed in the sphere, so slightly less area than 4π
        assert!((r.willmore - 4.0 * PI).abs() <= 0.01 * 4.0 * PI);
        let torus = TriMesh::torus(2.0, 0.7, 48, 24).unwrap();
        assert_eq!(torus.genus(), 1);
        let total: f64 = mesh_curvatures(&torus).angle_deficit.iter().sum();
        assert!(total.abs() < 1e-9);
    }
}
