//! ASCII OFF reader and writer for closed triangle meshes.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use super::{DecError, SimplicialSurface};

fn parse_err(line: usize, msg: impl Into<String>) -> DecError {
    DecError::Parse {
        line,
        message: msg.into(),
    }
}

/// Parses OFF text. Faces are reoriented consistently by breadth-first
/// propagation from the first face of each component.
pub fn parse_off(text: &str) -> Result<SimplicialSurface, DecError> {
    // (line number, content) with comments and blank lines dropped
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut header_tokens = header.split_whitespace();
    if header_tokens.next() != Some("OFF") {
        return Err(parse_err(ln, "missing OFF header"));
    }
    let rest: Vec<&str> = header_tokens.collect();
    let (ln, counts_line) = if rest.is_empty() {
        lines
            .next()
            .ok_or_else(|| parse_err(ln + 1, "missing counts"))?
    } else {
        (ln, header)
    };
    let counts: Vec<usize> = counts_line
        .split_whitespace()
        .filter(|t| *t != "OFF")
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(ln, format!("bad count '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 {
        return Err(parse_err(ln, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(0, "too few vertex lines"))?;
        let xs: Vec<f64> = l
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| parse_err(ln, format!("bad coordinate '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        if xs.len() != 3 {
            return Err(parse_err(ln, "vertex needs three coordinates"));
        }
        positions.push([xs[0], xs[1], xs[2]]);
    }
    let mut faces = Vec::with_capacity(nf);
    for fi in 0..nf {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(0, "too few face lines"))?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(ln, format!("bad index '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        if ids.is_empty() || ids[0] != 3 || ids.len() < 4 {
            return Err(DecError::NonTriangleFace(fi));
        }
        if ids[1..4].iter().any(|&v| v >= nv) {
            return Err(parse_err(ln, "vertex index out of range"));
        }
        faces.push([ids[1], ids[2], ids[3]]);
    }
    orient_faces(&mut faces)?;
    SimplicialSurface::embedded(positions, faces)
}

/// Makes adjacent faces traverse shared edges in opposite directions.
fn orient_faces(faces: &mut [[usize; 3]]) -> Result<(), DecError> {
    let mut by_edge: HashMap<[usize; 2], Vec<usize>> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            by_edge.entry([a.min(b), a.max(b)]).or_default().push(fi);
        }
    }
    let mut edges: Vec<_> = by_edge.iter().collect();
    edges.sort();
    for (key, adj) in edges {
        if adj.len() != 2 {
            return Err(DecError::NonManifoldEdge {
                a: key[0],
                b: key[1],
                faces: adj.len(),
            });
        }
    }
    let directed =
        |f: &[usize; 3], a: usize, b: usize| (0..3).any(|k| f[k] == a && f[(k + 1) % 3] == b);
    let mut visited = vec![false; faces.len()];
    for start in 0..faces.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(fi) = queue.pop_front() {
            let f = faces[fi];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let adj = &by_edge[&[a.min(b), a.max(b)]];
                let g = if adj[0] == fi { adj[1] } else { adj[0] };
                // a consistent neighbour traverses b → a
                let agrees = directed(&faces[g], b, a);
                if visited[g] {
                    if !agrees {
                        return Err(DecError::NonOrientable);
                    }
                    continue;
                }
                if !agrees {
                    faces[g].swap(1, 2);
                }
                visited[g] = true;
                queue.push_back(g);
            }
        }
    }
    Ok(())
}

pub fn load_off(path: &Path) -> Result<SimplicialSurface, DecError> {
    let text = std::fs::read_to_string(path).map_err(|e| DecError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_off(&text)
}

/// OFF text with shortest round-trip float formatting.
pub fn write_off(mesh: &SimplicialSurface) -> String {
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(
        s,
        "{} {} {}",
        mesh.num_vertices(),
        mesh.num_faces(),
        mesh.num_edges()
    )
    .unwrap();
    for p in mesh.positions() {
        writeln!(s, "{} {} {}", p[0], p[1], p[2]).unwrap();
    }
    for f in mesh.faces() {
        writeln!(s, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
    }
    s
}
