use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

use tropvb::klyachko::{family_to_cocycle, FanAtlas, KlyachkoFamily, LineCocycle, RankNCocycle};
use tropvb::semiring::Tropical;
use tropvb::toric::{corpus, Fan};

fn tropvb(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropvb")).args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), v)
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fan_file(dir: &TempDir, name: &str, f: &Fan) -> PathBuf {
    write(dir, &format!("{name}.json"), &serde_json::to_value(f).unwrap())
}

#[test]
fn gallery_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("fans");
    let (code, v) = tropvb(&["gallery", s(&g)]);
    assert_eq!(code, 0);
    let ranks: Vec<u64> = v["result"]["fans"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["pic"]["free_rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, vec![0, 1, 1, 2, 2]);
    let mut names: Vec<String> = fs::read_dir(&g).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["a2.json", "f1.json", "manifest.json", "p1.json", "p1xp1.json", "p2.json"]);
    let before: Vec<Vec<u8>> = names.iter().map(|n| fs::read(g.join(n)).unwrap()).collect();
    assert_eq!(tropvb(&["gallery", s(&g)]).0, 0);
    let after: Vec<Vec<u8>> = names.iter().map(|n| fs::read(g.join(n)).unwrap()).collect();
    assert_eq!(before, after);

    fs::write(g.join("p2.json"), "{}").unwrap();
    let (code, v) = tropvb(&["gallery", s(&g)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "IoError");
    assert_eq!(tropvb(&["gallery", s(&g), "--force"]).0, 0);
    assert_eq!(fs::read(g.join("p2.json")).unwrap(), before[5]);

    let (code, v) = tropvb(&["picard", s(&g.join("p2.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pic"]["free_rank"], 1);
    assert_eq!(v["result"]["pic"]["torsion"], json!([]));
}

#[test]
fn broken_fan_names_the_pair() {
    let dir = TempDir::new().unwrap();
    let bad = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2]],
    );
    let (code, v) = tropvb(&["validate-fan", s(&fan_file(&dir, "bad", &bad))]);
    assert_eq!(code, 1);
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["code"], "InvalidFan");
    assert_eq!(v["error"]["witness"], json!({"kind": "bad_intersection", "first": 3, "second": 4}));

    let (code, v) = tropvb(&["validate-fan", s(&fan_file(&dir, "p2", &corpus::p2()))]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["smooth"], true);
}

#[test]
fn io_and_parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let (code, v) = tropvb(&["picard", s(&dir.path().join("missing.json"))]);
    assert_eq!((code, v["error"]["code"].as_str()), (2, Some("IoError")));
    let p = dir.path().join("junk.json");
    fs::write(&p, "{not json").unwrap();
    let (code, v) = tropvb(&["picard", s(&p)]);
    assert_eq!((code, v["error"]["code"].as_str()), (2, Some("ParseError")));
    let p = write(&dir, "shape.json", &json!({"rank": 1}));
    assert_eq!(tropvb(&["picard", s(&p)]).0, 2);
}

#[test]
fn split_rank_two_bundle() {
    let dir = TempDir::new().unwrap();
    let a = FanAtlas::new(corpus::p1()).unwrap();
    let line = |v: &[i64]| -> LineCocycle<Tropical> {
        family_to_cocycle(&KlyachkoFamily::from_ray_values(a.clone(), v).unwrap())
    };
    let c = RankNCocycle::direct_sum(&[line(&[2, 0]), line(&[0, -1])]).unwrap();
    let p = write(&dir, "rank2_p1.json", &serde_json::to_value(&c).unwrap());
    let (code, v) = tropvb(&["split", s(&p)]);
    assert_eq!(code, 0, "{v}");
    let classes = v["result"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    let mut degrees: Vec<i64> = classes.iter().map(|c| c[0].as_i64().unwrap().abs()).collect();
    degrees.sort();
    assert_eq!(degrees, vec![1, 2]);
    assert_eq!(tropvb(&["split", s(&p), "--anchor", "2"]).1["result"]["classes"], v["result"]["classes"]);
}

#[test]
fn families_spaces_and_matroids() {
    let dir = TempDir::new().unwrap();
    let p2 = fan_file(&dir, "p2", &corpus::p2());
    let (code, t1) = tropvb(&["tuple-to-space", "--random", "3", "--fan", s(&p2), "--seed", "5"]);
    assert_eq!(code, 0);
    let (_, t2) = tropvb(&["tuple-to-space", "--random", "3", "--fan", s(&p2), "--seed", "5"]);
    assert_eq!(t1, t2);
    let space = write(&dir, "space.json", &t1["result"]);
    let (code, tuple) = tropvb(&["space-to-tuple", s(&space)]);
    assert_eq!(code, 0);
    let tuple_file = write(
        &dir,
        "tuple.json",
        &json!({"fan": t1["result"]["fan"], "families": tuple["result"]["families"]}),
    );
    let (_, again) = tropvb(&["tuple-to-space", s(&tuple_file)]);
    assert_eq!(again["result"], t1["result"]);

    let (_, iso) = tropvb(&["space-iso", s(&space), s(&space)]);
    assert_eq!(iso["result"]["isomorphic"], true);
    let mut bumped = t1["result"].clone();
    let j = bumped["jumps"]["0"][0].as_i64().unwrap();
    bumped["jumps"]["0"][0] = json!(j + 1);
    let bumped = write(&dir, "bumped.json", &bumped);
    assert_eq!(tropvb(&["space-iso", s(&space), s(&bumped)]).1["result"]["isomorphic"], false);

    let (code, m) = tropvb(&["matroid-export", s(&space)]);
    assert_eq!(code, 0);
    assert_eq!(m["result"]["ground"], 3);
    assert_eq!(m["result"]["rays"].as_array().unwrap().len(), 3);

    let family = write(
        &dir,
        "family.json",
        &json!({"fan": serde_json::to_value(corpus::p2()).unwrap(), "reps": tuple["result"]["families"][0]}),
    );
    let (code, r) = tropvb(&["klyachko-check", s(&family)]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["ray"], Value::Null);
    let (code, c) = tropvb(&["family-to-cocycle", s(&family), "--semiring", "boolean"]);
    assert_eq!(code, 0);
    assert_eq!(c["result"]["charts"], json!([4, 5, 6]));
}

#[test]
fn singular_space_has_no_solution() {
    let dir = TempDir::new().unwrap();
    let space = write(
        &dir,
        "s.json",
        &json!({"fan": serde_json::to_value(corpus::singular_cone()).unwrap(), "rank": 1, "jumps": {"0": [0], "1": [1]}}),
    );
    let (code, v) = tropvb(&["space-to-tuple", s(&space)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "NoSolution");
    assert_eq!(v["error"]["witness"], json!({"cone": 3, "index": 0}));
}

#[test]
fn affine_triviality() {
    let dir = TempDir::new().unwrap();
    let a = FanAtlas::new(corpus::affine_plane()).unwrap();
    let c = LineCocycle::<Tropical>::trivial(a);
    let p = write(&dir, "c.json", &serde_json::to_value(&c).unwrap());
    let (code, v) = tropvb(&["trivialize-affine", s(&p), "--character", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], json!({"status": "obstructed", "ray": 0, "pairing": 1}));
    let (_, v) = tropvb(&["trivialize-affine", s(&p), "--character", "0,0"]);
    assert_eq!(v["result"]["status"], "trivialized");
    let (code, v) = tropvb(&["trivialize-affine", s(&p), "--character", "-1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pairing"], -1);
}

#[test]
fn cones_matrices_and_sn() {
    let dir = TempDir::new().unwrap();
    let cone = write(&dir, "cone.json", &json!({"rank": 2, "rays": [[1, 0], [1, 2]]}));
    let (code, v) = tropvb(&["dual-cone", s(&cone)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rays"], json!([[0, 1], [2, -1]]));
    let (_, v) = tropvb(&["orbit-primes", s(&cone)]);
    assert_eq!(v["result"].as_array().unwrap().len(), 4);

    let m = write(
        &dir,
        "m.json",
        &json!({"semiring": "tropical", "matrix": [[{"t": "-inf"}, {"t": "2"}], [{"t": "7"}, {"t": "-inf"}]]}),
    );
    let (code, v) = tropvb(&["gl-decompose", s(&m)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["perm"], json!([1, 0]));
    assert_eq!(v["result"]["diag"], json!([{"t": "7/1"}, {"t": "2/1"}]));
    let b = write(&dir, "b.json", &json!({"semiring": "boolean", "matrix": [[1, 1], [1, 0]]}));
    let (code, v) = tropvb(&["gl-decompose", s(&b)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "NotInvertible");
    assert_eq!(v["error"]["witness"]["kind"], "multiple_nonzero");

    let (code, v) = tropvb(&["sn-table", "--n", "3"]);
    assert_eq!(code, 0);
    let table = v["result"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 6);
    let anti = v["result"]["antipodes"].as_array().unwrap();
    for (i, row) in table.iter().enumerate() {
        // the identity is the first element listed
        let j = anti[i].as_u64().unwrap() as usize;
        assert_eq!(row[j], 0);
    }
}

#[test]
fn output_flag_writes_the_envelope() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.json");
    let p1 = fan_file(&dir, "p1", &corpus::p1());
    let status = Command::new(env!("CARGO_BIN_EXE_tropvb"))
        .args(["picard-equivariant", s(&p1), "-o", s(&out)])
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["free_rank"], 2);
}
