//! Scene JSON: the on-disk format tying together a polygon, optional vertex
//! roles, guards and an optional formula. Scalars are decimal integer or
//! "p/q" strings, so round-trips are exact.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use loclab::geom::Point;
use loclab::model::{Guard, MonotoneFormula, Polygon};
use loclab::spike::{SpikeParams, SpikePolygon, VertexRole};

#[derive(Debug)]
pub enum SceneError {
    Json(String),
    Polygon(String),
    DuplicateKey(String),
    UnknownFormulaKey(String),
    EmptyFormulaNode,
    Roles(String),
    NotASpikeScene(String),
}

impl std::fmt::Display for SceneError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SceneError::Json(e) => write!(f, "malformed scene JSON: {e}"),
            SceneError::Polygon(e) => write!(f, "invalid polygon: {e}"),
            SceneError::DuplicateKey(k) => write!(f, "duplicate guard key {k:?}"),
            SceneError::UnknownFormulaKey(k) => {
                write!(f, "formula references unknown key {k:?}")
            }
            SceneError::EmptyFormulaNode => write!(f, "formula and/or node has no children"),
            SceneError::Roles(e) => write!(f, "invalid roles: {e}"),
            SceneError::NotASpikeScene(e) => {
                write!(f, "scene is not a generated spike polygon: {e}")
            }
        }
    }
}

impl std::error::Error for SceneError {}

/// Raw JSON document shape.
#[derive(Serialize, Deserialize)]
struct SceneDoc {
    polygon: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roles: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    guards: Vec<Guard>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<MonotoneFormula>,
}

/// A validated scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub polygon: Polygon,
    pub roles: Option<Vec<VertexRole>>,
    pub guards: Vec<Guard>,
    pub formula: Option<MonotoneFormula>,
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let doc: SceneDoc = serde_json::from_str(text).map_err(|e| SceneError::Json(e.to_string()))?;
    let polygon = Polygon::new(doc.polygon).map_err(|e| SceneError::Polygon(e.to_string()))?;

    let mut keys: BTreeSet<String> = BTreeSet::new();
    for g in &doc.guards {
        if !keys.insert(g.key().to_string()) {
            return Err(SceneError::DuplicateKey(g.key().to_string()));
        }
    }
    if let Some(f) = &doc.formula {
        f.validate(&keys).map_err(|e| match e {
            loclab::model::FormulaError::UnknownKey(k) => SceneError::UnknownFormulaKey(k),
            loclab::model::FormulaError::EmptyNode => SceneError::EmptyFormulaNode,
        })?;
    }
    let roles = match doc.roles {
        None => None,
        Some(raw) => {
            if raw.len() != polygon.len() {
                return Err(SceneError::Roles(format!(
                    "{} roles for {} vertices",
                    raw.len(),
                    polygon.len()
                )));
            }
            let mut roles = Vec::with_capacity(raw.len());
            for r in raw {
                roles.push(
                    VertexRole::parse(&r)
                        .ok_or_else(|| SceneError::Roles(format!("unknown role {r:?}")))?,
                );
            }
            Some(roles)
        }
    };
    Ok(Scene {
        polygon,
        roles,
        guards: doc.guards,
        formula: doc.formula,
    })
}

pub fn scene_to_json(scene: &Scene) -> String {
    let doc = SceneDoc {
        polygon: scene.polygon.vertices().to_vec(),
        roles: scene
            .roles
            .as_ref()
            .map(|rs| rs.iter().map(|r| r.to_string()).collect()),
        guards: scene.guards.clone(),
        formula: scene.formula.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("scene serialization cannot fail")
}

pub fn spike_scene(sp: &SpikePolygon) -> Scene {
    Scene {
        polygon: sp.polygon().clone(),
        roles: Some(sp.roles().to_vec()),
        guards: Vec::new(),
        formula: None,
    }
}

/// Rebuild the spike polygon from a generated scene: infer (m, w, h, delta)
/// from the labeled vertices and require the embedding to match exactly.
pub fn spike_from_scene(scene: &Scene) -> Result<SpikePolygon, SceneError> {
    let roles = scene
        .roles
        .as_ref()
        .ok_or_else(|| SceneError::NotASpikeScene("missing roles".into()))?;
    let n = scene.polygon.len();
    if n % 3 != 0 || n < 6 {
        return Err(SceneError::NotASpikeScene(format!("{n} vertices")));
    }
    let m = n / 3;
    for (idx, role) in roles.iter().enumerate() {
        let i = idx / 3 + 1;
        let expected = match idx % 3 {
            0 => VertexRole::Left(i),
            1 => VertexRole::Tip(i),
            2 => VertexRole::Right(i),
            _ => unreachable!(),
        };
        if *role != expected {
            return Err(SceneError::NotASpikeScene(format!(
                "role {role} at position {idx} (expected {expected})"
            )));
        }
    }
    // t_1 = (0, h/2), l_1 = (-delta, -h), t_2 = (w, ...).
    let t1 = scene.polygon.vertex(1);
    let l1 = scene.polygon.vertex(0);
    let t2 = scene.polygon.vertex(4);
    let h = &t1.y + &t1.y;
    let delta = -&l1.x;
    let w = t2.x.clone();
    let params =
        SpikeParams::new(m, w, h, delta).map_err(|e| SceneError::NotASpikeScene(e.to_string()))?;
    let sp = SpikePolygon::build(params).map_err(|e| SceneError::NotASpikeScene(e.to_string()))?;
    if sp.polygon().vertices() != scene.polygon.vertices() {
        return Err(SceneError::NotASpikeScene(
            "vertices do not match the embedding for the inferred parameters".into(),
        ));
    }
    Ok(sp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use loclab::geom::Scalar;
    use loclab::model::NaturalSide;

    fn square_scene_json() -> String {
        r#"{
            "polygon": [["0","0"],["1","0"],["1","1"],["0","1"]],
            "guards": [
                {"apex":["0","0"],"d1":["1","0"],"d2":["0","1"],"reflex":false,"key":"k1"},
                {"apex":["1","1"],"d1":["-1","0"],"d2":["0","-1"],"reflex":false,"key":"k2"}
            ],
            "formula": ["and","k1","k2"]
        }"#
        .to_string()
    }

    #[test]
    fn parses_minimal_square_scene() {
        let scene = parse_scene(&square_scene_json()).unwrap();
        assert_eq!(scene.polygon.len(), 4);
        assert_eq!(scene.guards.len(), 2);
        assert!(scene.formula.is_some());
    }

    #[test]
    fn scalar_strings_round_trip() {
        let scene = parse_scene(&square_scene_json()).unwrap();
        let json = scene_to_json(&scene);
        let back = parse_scene(&json).unwrap();
        assert_eq!(back.polygon.vertices(), scene.polygon.vertices());
        assert_eq!(back.guards, scene.guards);
        assert_eq!(back.formula, scene.formula);

        let fancy = r#"{"polygon": [["0","0"],["5/41","0"],["0","1/3"]]}"#;
        let scene = parse_scene(fancy).unwrap();
        assert_eq!(scene.polygon.vertex(1).x, Scalar::ratio(5, 41));
        let json = scene_to_json(&scene);
        assert!(json.contains("5/41"));
    }

    #[test]
    fn distinct_diagnostics() {
        let bowtie = r#"{"polygon": [["0","0"],["2","2"],["2","0"],["0","2"]]}"#;
        let err = parse_scene(bowtie).unwrap_err();
        assert!(err.to_string().contains("non-simple"), "{err}");

        let dup = r#"{
            "polygon": [["0","0"],["1","0"],["0","1"]],
            "guards": [
                {"apex":["0","0"],"d1":["1","0"],"d2":["0","1"],"reflex":false,"key":"k"},
                {"apex":["1","0"],"d1":["0","1"],"d2":["-1","0"],"reflex":false,"key":"k"}
            ]
        }"#;
        let err = parse_scene(dup).unwrap_err();
        assert!(matches!(err, SceneError::DuplicateKey(_)), "{err}");

        let unknown = r#"{
            "polygon": [["0","0"],["1","0"],["0","1"]],
            "guards": [{"apex":["0","0"],"d1":["1","0"],"d2":["0","1"],"reflex":false,"key":"k"}],
            "formula": "ghost"
        }"#;
        let err = parse_scene(unknown).unwrap_err();
        assert!(matches!(err, SceneError::UnknownFormulaKey(_)), "{err}");

        let garbage = "{not json";
        assert!(matches!(parse_scene(garbage), Err(SceneError::Json(_))));
    }

    #[test]
    fn spike_scene_round_trip() {
        let cases = [
            SpikeParams::of_ints(3, 40, 2, 1).unwrap(),
            SpikeParams::new(
                2,
                Scalar::ratio(5, 2),
                Scalar::ratio(3, 2),
                Scalar::ratio(1, 3),
            )
            .unwrap(),
        ];
        for params in cases {
            let sp = SpikePolygon::build(params).unwrap();
            let scene = spike_scene(&sp);
            let json = scene_to_json(&scene);
            let back = parse_scene(&json).unwrap();
            let rebuilt = spike_from_scene(&back).unwrap();
            assert_eq!(rebuilt.polygon().vertices(), sp.polygon().vertices());
            assert_eq!(rebuilt.params(), sp.params());
        }
    }

    #[test]
    fn spike_from_scene_rejects_foreign_polygons() {
        let sq = Polygon::new(vec![
            loclab::geom::pt(0, 0),
            loclab::geom::pt(1, 0),
            loclab::geom::pt(1, 1),
            loclab::geom::pt(0, 1),
        ])
        .unwrap();
        let scene = Scene {
            polygon: sq,
            roles: None,
            guards: Vec::new(),
            formula: None,
        };
        assert!(matches!(
            spike_from_scene(&scene),
            Err(SceneError::NotASpikeScene(_))
        ));
    }

    #[test]
    fn natural_guard_serializes_into_scene() {
        let sq = Polygon::new(vec![
            loclab::geom::pt(0, 0),
            loclab::geom::pt(1, 0),
            loclab::geom::pt(1, 1),
            loclab::geom::pt(0, 1),
        ])
        .unwrap();
        let scene = Scene {
            guards: vec![
                Guard::natural(&sq, 0, NaturalSide::Internal, "k1"),
                Guard::natural(&sq, 2, NaturalSide::Internal, "k2"),
            ],
            polygon: sq,
            roles: None,
            formula: Some(MonotoneFormula::and(vec![
                MonotoneFormula::key("k1"),
                MonotoneFormula::key("k2"),
            ])),
        };
        let json = scene_to_json(&scene);
        let back = parse_scene(&json).unwrap();
        assert_eq!(back.guards, scene.guards);
    }
}
