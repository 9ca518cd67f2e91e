use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use tropvb::klyachko::{
    check_family, family_to_cocycle, space_iso, space_to_matroid_bundle, space_to_tuple, split_cocycle,
    trivialize_affine, tuple_to_space, DeltaKlyachkoSpace, FanAtlas, KlyachkoFamily, LineCocycle, RankNCocycle,
};
use tropvb::linear::{decompose_invertible, sn_convolve, Matrix, Permutation, SnSelection};
use tropvb::picard::{equivariant_picard, picard};
use tropvb::semiring::{Boolean, Semiring, Tropical};
use tropvb::toric::{corpus, dual_cone, orbit_cone_primes, validate_fan, Cone, Fan};
use tropvb::Error;

#[derive(Parser)]
#[command(name = "tropvb", version, about = "Toric vector bundles over idempotent semifields")]
struct Cli {
    /// Write the JSON envelope here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Also print a one-line summary to stderr.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemiringArg {
    Tropical,
    Boolean,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan axioms.
    ValidateFan { fan: PathBuf },
    /// Dual cone of `{"rank", "rays"}`.
    DualCone { cone: PathBuf },
    /// Monomial primes of a cone's chart monoid, one per face.
    OrbitPrimes { cone: PathBuf },
    /// Kernel, Pic_G, Pic and ψ.
    Picard { fan: PathBuf },
    /// Pic_G with generating families.
    PicardEquivariant { fan: PathBuf },
    /// The three compatibility tests on `{"fan", "reps"}`.
    KlyachkoCheck { family: PathBuf },
    FamilyToCocycle {
        family: PathBuf,
        #[arg(long, value_enum, default_value = "tropical")]
        semiring: SemiringArg,
    },
    /// Split a rank-n cocycle into line cocycles and classify them.
    Split {
        cocycle: PathBuf,
        #[arg(long)]
        anchor: Option<usize>,
        #[arg(long, value_enum, default_value = "tropical")]
        semiring: SemiringArg,
    },
    TrivializeAffine {
        cocycle: PathBuf,
        /// Comma-separated character, e.g. `1,0`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        character: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value = "tropical")]
        semiring: SemiringArg,
    },
    /// `{"fan", "families": [reps...]}`, or `--random N --fan FILE`.
    TupleToSpace {
        tuple: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        fan: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    SpaceToTuple { space: PathBuf },
    SpaceIso { first: PathBuf, second: PathBuf },
    MatroidExport { space: PathBuf },
    /// `{"semiring", "matrix"}`.
    GlDecompose { matrix: PathBuf },
    /// Convolution table of `S_n`.
    SnTable {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Write the bundled corpus fans and a manifest to a directory.
    Gallery {
        dir: PathBuf,
        /// Overwrite files whose contents differ.
        #[arg(long)]
        force: bool,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
    Parse(String),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) | Failure::Parse(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Domain(e) => e.to_json(),
            Failure::Io(m) => json!({ "code": "IoError", "message": m, "witness": null }),
            Failure::Parse(m) => json!({ "code": "ParseError", "message": m, "witness": null }),
        }
    }
}

type Run = Result<(Value, String), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| Failure::Parse(format!("{what}: {e}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// Shape errors in nested objects are parse errors under the exit-code contract.
fn reshape(e: tropvb::klyachko::KlyachkoError) -> Failure {
    match e {
        tropvb::klyachko::KlyachkoError::ShapeMismatch(m) => Failure::Parse(m),
        other => other.into(),
    }
}

fn load_fan(v: &Value) -> Result<Fan, Failure> {
    parse(v, "fan")
}

fn load_atlas(v: &Value) -> Result<Arc<FanAtlas>, Failure> {
    Ok(FanAtlas::new(load_fan(v)?)?)
}

#[derive(serde::Deserialize)]
struct ConeJson {
    rank: usize,
    rays: Vec<Vec<i64>>,
}

fn load_cone(path: &Path) -> Result<Cone, Failure> {
    let c: ConeJson = parse(&read_json(path)?, "cone")?;
    Ok(Cone::new(c.rank, c.rays)?)
}

fn reps_json(f: &KlyachkoFamily) -> Value {
    to_value(&f.reps().iter().cloned().enumerate().collect::<std::collections::BTreeMap<_, _>>())
}

fn space_json(s: &DeltaKlyachkoSpace) -> Value {
    let mut v = to_value(s);
    v["fan"] = to_value(s.atlas().fan());
    v
}

fn load_space(path: &Path) -> Result<DeltaKlyachkoSpace, Failure> {
    let v = read_json(path)?;
    let atlas = load_atlas(&v["fan"])?;
    DeltaKlyachkoSpace::from_json(atlas, &v).map_err(reshape)
}

fn split_with<S>(v: &Value, anchor: Option<usize>) -> Run
where
    S: Semiring + Serialize + DeserializeOwned,
{
    let atlas = load_atlas(&v["fan"])?;
    let c: RankNCocycle<S> = RankNCocycle::from_json(atlas.clone(), v).map_err(reshape)?;
    let parts = split_cocycle(&c, anchor)?;
    let report = picard(&atlas)?;
    let classes = parts
        .iter()
        .map(|l| report.classify(l).map(|k| k.class))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = format!("{} summands with classes {classes:?}", parts.len());
    Ok((json!({ "summands": to_value(&parts), "classes": classes }), summary))
}

fn trivialize_with<S>(v: &Value, character: Option<&[i64]>) -> Run
where
    S: Semiring + Serialize + DeserializeOwned,
{
    let atlas = load_atlas(&v["fan"])?;
    let c: LineCocycle<S> = LineCocycle::from_json(atlas, v).map_err(reshape)?;
    let t = trivialize_affine(&c, character)?;
    let summary = match &t {
        tropvb::klyachko::Trivialization::Trivialized { .. } => "trivialized".to_string(),
        tropvb::klyachko::Trivialization::Obstructed { ray, pairing } => {
            format!("obstructed at ray {ray} (pairing {pairing})")
        }
    };
    Ok((to_value(&t), summary))
}

fn decompose_with<S>(m: &Value) -> Run
where
    S: Semiring + Serialize + DeserializeOwned,
{
    let rows: Vec<Vec<S>> = parse(m, "matrix")?;
    let a = Matrix::from_rows(rows)?;
    let g = decompose_invertible(&a)?;
    let summary = format!("permutation {:?}", g.perm.images());
    Ok((json!({ "perm": g.perm, "diag": g.diag, "inverse": g.inverse() }), summary))
}

fn sn_table(n: usize) -> Run {
    if n > 5 {
        return Err(tropvb::linear::LinearError::TooLarge(n).into());
    }
    let group = Permutation::all(n);
    let index = |p: &Permutation| group.iter().position(|q| q == p).expect("closed under products");
    let mut table = Vec::with_capacity(group.len());
    for a in &group {
        let mut row = Vec::with_capacity(group.len());
        for b in &group {
            let c = sn_convolve(&SnSelection::new(a.clone()), &SnSelection::new(b.clone()))?;
            row.push(index(&c.sigma));
        }
        table.push(row);
    }
    let antipodes: Vec<usize> = group.iter().map(|a| index(&SnSelection::new(a.clone()).antipode().sigma)).collect();
    let summary = format!("S_{n}: {} elements", group.len());
    Ok((json!({ "n": n, "elements": group, "table": table, "antipodes": antipodes }), summary))
}

fn write_if_changed(path: &Path, contents: &str, force: bool) -> Result<bool, Failure> {
    if let Ok(old) = fs::read_to_string(path) {
        if old == contents {
            return Ok(false);
        }
        if !force {
            return Err(Failure::Io(format!("{} exists with different contents; use --force", path.display())));
        }
    }
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(true)
}

fn gallery(dir: &Path, force: bool) -> Run {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let mut manifest = Vec::new();
    let mut written = 0;
    for (name, fan) in corpus::gallery() {
        let file = format!("{name}.json");
        let text = serde_json::to_string_pretty(&fan).expect("fans serialize") + "\n";
        written += usize::from(write_if_changed(&dir.join(&file), &text, force)?);
        let r = picard(&FanAtlas::new(fan)?)?;
        manifest.push(json!({
            "name": name,
            "file": file,
            "pic": { "free_rank": r.pic.free_rank, "torsion": r.pic.invariant_factors },
            "pic_g": { "free_rank": r.pic_g.free_rank, "torsion": r.pic_g.invariant_factors },
        }));
    }
    let manifest = json!({ "fans": manifest });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    written += usize::from(write_if_changed(&dir.join("manifest.json"), &text, force)?);
    let summary = format!("{written} files written to {}", dir.display());
    Ok((manifest, summary))
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::ValidateFan { fan } => {
            let f = load_fan(&read_json(&fan)?)?;
            validate_fan(&f).map_err(tropvb::toric::ToricError::InvalidFan)?;
            let summary = format!("valid fan: {} rays, {} cones", f.rays.len(), f.cones.len());
            Ok((
                json!({
                    "valid": true,
                    "maximal_cones": f.maximal_cones(),
                    "smooth": f.is_smooth(),
                }),
                summary,
            ))
        }
        Command::DualCone { cone } => {
            let d = dual_cone(&load_cone(&cone)?)?;
            let summary = format!("dual has {} rays", d.rays().len());
            Ok((to_value(&d), summary))
        }
        Command::OrbitPrimes { cone } => {
            let p = orbit_cone_primes(&load_cone(&cone)?)?;
            let summary = format!("{} primes", p.len());
            Ok((to_value(&p), summary))
        }
        Command::Picard { fan } => {
            let r = picard(&load_atlas(&read_json(&fan)?)?)?;
            let summary = format!(
                "Pic = Z^{} torsion {:?}; Pic_G = Z^{}",
                r.pic.free_rank, r.pic.invariant_factors, r.pic_g.free_rank
            );
            Ok((to_value(&r), summary))
        }
        Command::PicardEquivariant { fan } => {
            let e = equivariant_picard(&load_atlas(&read_json(&fan)?)?);
            let summary = format!("Pic_G = Z^{}", e.rank());
            Ok((to_value(&e), summary))
        }
        Command::KlyachkoCheck { family } => {
            let v = read_json(&family)?;
            let atlas = load_atlas(&v["fan"])?;
            let reps = parse(&v["reps"], "reps")?;
            let r = check_family(&atlas, &reps)?;
            let summary = if r.is_valid() { "compatible" } else { "not compatible" }.to_string();
            Ok((to_value(&r), summary))
        }
        Command::FamilyToCocycle { family, semiring } => {
            let v = read_json(&family)?;
            let f = KlyachkoFamily::from_json(load_atlas(&v["fan"])?, &v).map_err(reshape)?;
            let out = match semiring {
                SemiringArg::Tropical => to_value(&family_to_cocycle::<Tropical>(&f)),
                SemiringArg::Boolean => to_value(&family_to_cocycle::<Boolean>(&f)),
            };
            Ok((out, format!("{} charts", f.atlas().maximal().len())))
        }
        Command::Split { cocycle, anchor, semiring } => {
            let v = read_json(&cocycle)?;
            match semiring {
                SemiringArg::Tropical => split_with::<Tropical>(&v, anchor),
                SemiringArg::Boolean => split_with::<Boolean>(&v, anchor),
            }
        }
        Command::TrivializeAffine {
            cocycle,
            character,
            semiring,
        } => {
            let v = read_json(&cocycle)?;
            match semiring {
                SemiringArg::Tropical => trivialize_with::<Tropical>(&v, character.as_deref()),
                SemiringArg::Boolean => trivialize_with::<Boolean>(&v, character.as_deref()),
            }
        }
        Command::TupleToSpace {
            tuple,
            random,
            fan,
            seed,
        } => {
            let families = match (tuple, random, fan) {
                (Some(path), None, None) => {
                    let v = read_json(&path)?;
                    let atlas = load_atlas(&v["fan"])?;
                    let list: Vec<Value> = parse(&v["families"], "families")?;
                    list.iter()
                        .map(|r| KlyachkoFamily::from_json(atlas.clone(), &json!({ "reps": r })).map_err(reshape))
                        .collect::<Result<Vec<_>, _>>()?
                }
                (None, Some(n), Some(fan)) => {
                    let atlas = load_atlas(&read_json(&fan)?)?;
                    let eq = equivariant_picard(&atlas);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..n)
                        .map(|_| {
                            let c: Vec<i64> = (0..eq.rank()).map(|_| rng.gen_range(-3..=3)).collect();
                            eq.family(&c)
                        })
                        .collect()
                }
                _ => return Err(Failure::Parse("give either a tuple file or --random N --fan FILE".into())),
            };
            let s = tuple_to_space(&families)?;
            let summary = format!("rank {} space on {} rays", s.rank(), s.atlas().num_rays());
            Ok((space_json(&s), summary))
        }
        Command::SpaceToTuple { space } => {
            let s = load_space(&space)?;
            let t = space_to_tuple(&s)?;
            let summary = format!("{} families", t.len());
            Ok((json!({ "families": t.iter().map(reps_json).collect::<Vec<_>>() }), summary))
        }
        Command::SpaceIso { first, second } => {
            let iso = space_iso(&load_space(&first)?, &load_space(&second)?)?;
            let summary = if iso { "isomorphic" } else { "not isomorphic" }.to_string();
            Ok((json!({ "isomorphic": iso }), summary))
        }
        Command::MatroidExport { space } => {
            let m = space_to_matroid_bundle(&load_space(&space)?);
            let summary = format!("ground set of size {}, {} chains", m.ground, m.rays.len());
            Ok((to_value(&m), summary))
        }
        Command::GlDecompose { matrix } => {
            let v = read_json(&matrix)?;
            match v["semiring"].as_str() {
                Some("tropical") | None => decompose_with::<Tropical>(&v["matrix"]),
                Some("boolean") => decompose_with::<Boolean>(&v["matrix"]),
                Some(other) => Err(Failure::Parse(format!("unknown semiring {other:?}"))),
            }
        }
        Command::SnTable { n } => sn_table(n),
        Command::Gallery { dir, force } => gallery(&dir, force),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (envelope, code, summary) = match run(cli.command) {
        Ok((result, summary)) => (json!({ "ok": true, "result": result }), 0, summary),
        Err(f) => {
            let e = f.to_json();
            let summary = format!("error {}: {}", e["code"].as_str().unwrap_or("?"), e["message"]);
            (json!({ "ok": false, "error": e }), f.exit_code(), summary)
        }
    };
    let text = serde_json::to_string_pretty(&envelope).expect("envelope serializes") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if cli.human {
        eprintln!("{summary}");
    }
    ExitCode::from(code)
}
