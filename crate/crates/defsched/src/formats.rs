//! On-disk formats. Instances, solutions and fronts are JSON; fronts,
//! reports and iteration ledgers are also written as CSV. Every member,
//! defence, role, day, slot, room and subject id in a file is 1-based.
//! Objective values keep the solver's maximisation convention, so
//! minimised objectives appear negated.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use defsched_core::model::{
    Dimensions, FullSolution, Instance, InstanceData, ModelError, Objective, ObjectiveVector, Penalty,
    Placement, Schedule, Violation,
};
use defsched_core::pareto::{dominates, ArchiveEntry, FrontArchive};
use defsched_core::CommitteeConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const INSTANCE_FORMAT: &str = "defsched-instance";
pub const SOLUTION_FORMAT: &str = "defsched-solution";
pub const FRONT_FORMAT: &str = "defsched-front";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    InFile { path: PathBuf, source: Box<FormatError> },
    #[error("field `{field}`: {message}")]
    Json { field: String, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Header(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.into(), message: message.into() }
}

fn in_file(path: &Path) -> impl FnOnce(FormatError) -> FormatError + '_ {
    move |e| match e {
        e @ (FormatError::Io { .. } | FormatError::InFile { .. }) => e,
        e => FormatError::InFile { path: path.to_path_buf(), source: Box::new(e) },
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &[u8]) -> Result<(), FormatError> {
    fs::write(path, contents).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Deserializes JSON, naming the offending field on failure.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        FormatError::Json { field, message: e.into_inner().to_string() }
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    write(path, to_json(value).as_bytes())
}

/// Converts a 1-based id at `field` into a 0-based index below `bound`.
fn id(field: impl Fn() -> String, value: usize, bound: usize, what: &str) -> Result<usize, FormatError> {
    if value == 0 || value > bound {
        return Err(field_error(field(), format!("{what} id {value} out of range 1..={bound}")));
    }
    Ok(value - 1)
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<(), FormatError> {
    if format != expected {
        return Err(field_error("format", format!("expected \"{expected}\", found \"{format}\"")));
    }
    if version != FORMAT_VERSION {
        return Err(field_error("version", format!("unsupported version {version} (expected {FORMAT_VERSION})")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionsFile {
    pub members: usize,
    pub defences: usize,
    pub roles: usize,
    pub days: usize,
    pub slots_per_day: usize,
    pub rooms: usize,
    pub subjects: usize,
    pub duration: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyFile {
    pub member: usize,
    pub day: usize,
    pub slot: usize,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    pub dimensions: DimensionsFile,
    /// `[defence][role]` → eligible members.
    pub eligibility: Vec<Vec<Vec<usize>>>,
    /// Per member, available `[day, slot]` pairs.
    pub availability: Vec<Vec<[usize; 2]>>,
    pub member_expertise: Vec<Vec<usize>>,
    pub defence_subjects: Vec<Vec<usize>>,
    /// Nonzero penalties only.
    #[serde(default)]
    pub penalties: Vec<PenaltyFile>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        let d = instance.dims();
        let data = instance.to_data();
        let plus = |v: &Vec<usize>| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        InstanceFile {
            format: INSTANCE_FORMAT.into(),
            version: FORMAT_VERSION,
            dimensions: DimensionsFile {
                members: d.members,
                defences: d.defences,
                roles: d.roles,
                days: d.days,
                slots_per_day: d.slots_per_day,
                rooms: d.rooms,
                subjects: d.subjects,
                duration: d.duration,
            },
            eligibility: data.eligibility.iter().map(|roles| roles.iter().map(plus).collect()).collect(),
            availability: data
                .availability
                .iter()
                .map(|slots| slots.iter().map(|&(k, l)| [k + 1, l + 1]).collect())
                .collect(),
            member_expertise: data.member_expertise.iter().map(plus).collect(),
            defence_subjects: data.defence_subjects.iter().map(plus).collect(),
            penalties: data
                .penalties
                .iter()
                .map(|p| PenaltyFile { member: p.member + 1, day: p.day + 1, slot: p.slot + 1, value: p.value })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        check_header(&self.format, self.version, INSTANCE_FORMAT)?;
        let d = self.dimensions;
        let dims = Dimensions {
            members: d.members,
            defences: d.defences,
            roles: d.roles,
            days: d.days,
            slots_per_day: d.slots_per_day,
            rooms: d.rooms,
            subjects: d.subjects,
            duration: d.duration,
        };
        let ids = |field: &str, list: &[usize], bound: usize, what: &str| -> Result<Vec<usize>, FormatError> {
            list.iter().enumerate().map(|(n, &v)| id(|| format!("{field}[{n}]"), v, bound, what)).collect()
        };
        let mut eligibility = Vec::with_capacity(self.eligibility.len());
        for (j, roles) in self.eligibility.iter().enumerate() {
            let mut per_role = Vec::with_capacity(roles.len());
            for (t, members) in roles.iter().enumerate() {
                per_role.push(ids(&format!("eligibility[{j}][{t}]"), members, d.members, "member")?);
            }
            eligibility.push(per_role);
        }
        let mut availability = Vec::with_capacity(self.availability.len());
        for (i, slots) in self.availability.iter().enumerate() {
            let mut out = Vec::with_capacity(slots.len());
            for (n, &[k, l]) in slots.iter().enumerate() {
                let day = id(|| format!("availability[{i}][{n}][0]"), k, d.days, "day")?;
                let slot = id(|| format!("availability[{i}][{n}][1]"), l, d.slots_per_day, "slot")?;
                out.push((day, slot));
            }
            availability.push(out);
        }
        let mut member_expertise = Vec::with_capacity(self.member_expertise.len());
        for (i, s) in self.member_expertise.iter().enumerate() {
            member_expertise.push(ids(&format!("member_expertise[{i}]"), s, d.subjects, "subject")?);
        }
        let mut defence_subjects = Vec::with_capacity(self.defence_subjects.len());
        for (j, s) in self.defence_subjects.iter().enumerate() {
            defence_subjects.push(ids(&format!("defence_subjects[{j}]"), s, d.subjects, "subject")?);
        }
        let mut penalties = Vec::with_capacity(self.penalties.len());
        for (n, p) in self.penalties.iter().enumerate() {
            penalties.push(Penalty {
                member: id(|| format!("penalties[{n}].member"), p.member, d.members, "member")?,
                day: id(|| format!("penalties[{n}].day"), p.day, d.days, "day")?,
                slot: id(|| format!("penalties[{n}].slot"), p.slot, d.slots_per_day, "slot")?,
                value: p.value,
            });
        }
        let data = InstanceData { eligibility, availability, member_expertise, defence_subjects, penalties };
        Ok(Instance::new(dims, data)?)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    from_json::<InstanceFile>(text)?.to_instance()
}

pub fn instance_to_json(instance: &Instance) -> String {
    to_json(&InstanceFile::from_instance(instance))
}

pub fn load_instance(path: &Path) -> Result<Instance, FormatError> {
    parse_instance(&read(path)?).map_err(in_file(path))
}

pub fn save_instance(path: &Path, instance: &Instance) -> Result<(), FormatError> {
    write(path, instance_to_json(instance).as_bytes())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentFile {
    pub defence: usize,
    pub committee: Vec<usize>,
    pub day: usize,
    pub slot: usize,
    pub room: usize,
}

fn assignments(solution: &FullSolution) -> Vec<AssignmentFile> {
    solution
        .schedule
        .0
        .iter()
        .enumerate()
        .map(|(j, p)| AssignmentFile {
            defence: j + 1,
            committee: solution.config.committee(j).iter().map(|i| i + 1).collect(),
            day: p.day + 1,
            slot: p.slot + 1,
            room: p.room + 1,
        })
        .collect()
}

/// Rebuilds a solution. Ids must be in range; hard-constraint violations
/// (ineligible members, clashes, unavailability) are left for
/// `check_feasible` to report.
fn solution_from(field: &str, rows: &[AssignmentFile], instance: &Instance) -> Result<FullSolution, FormatError> {
    let n = instance.n_defences();
    let roles = instance.n_roles();
    let mut committees: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut placements: Vec<Option<Placement>> = vec![None; n];
    for (k, row) in rows.iter().enumerate() {
        let at = |f: &str| format!("{field}[{k}].{f}");
        let j = id(|| at("defence"), row.defence, n, "defence")?;
        if committees[j].is_some() {
            return Err(field_error(at("defence"), format!("defence {} assigned twice", row.defence)));
        }
        if row.committee.len() != roles {
            return Err(field_error(
                at("committee"),
                format!("expected {roles} members (one per role), found {}", row.committee.len()),
            ));
        }
        let committee = row
            .committee
            .iter()
            .enumerate()
            .map(|(t, &i)| id(|| format!("{}[{t}]", at("committee")), i, instance.n_members(), "member"))
            .collect::<Result<Vec<_>, _>>()?;
        committees[j] = Some(committee);
        placements[j] = Some(Placement {
            day: id(|| at("day"), row.day, instance.n_days(), "day")?,
            slot: id(|| at("slot"), row.slot, instance.n_slots_per_day(), "slot")?,
            room: id(|| at("room"), row.room, instance.n_rooms(), "room")?,
        });
    }
    if let Some(j) = committees.iter().position(Option::is_none) {
        return Err(field_error(field, format!("defence {} has no assignment", j + 1)));
    }
    let committees: Vec<Vec<usize>> = committees.into_iter().map(Option::unwrap).collect();
    Ok(FullSolution {
        config: CommitteeConfig::from_committees(&committees),
        schedule: Schedule(placements.into_iter().map(Option::unwrap).collect()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub format: String,
    pub version: u32,
    pub defences: Vec<AssignmentFile>,
    /// Informational; recomputed on evaluation.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub objectives: BTreeMap<String, i64>,
}

fn named(objectives: &[Objective], values: &ObjectiveVector) -> BTreeMap<String, i64> {
    objectives.iter().zip(values.as_slice()).map(|(o, &v)| (o.name().to_string(), v)).collect()
}

pub fn solution_to_json(solution: &FullSolution, objectives: &[Objective], values: Option<&ObjectiveVector>) -> String {
    to_json(&SolutionFile {
        format: SOLUTION_FORMAT.into(),
        version: FORMAT_VERSION,
        defences: assignments(solution),
        objectives: values.map(|v| named(objectives, v)).unwrap_or_default(),
    })
}

pub fn parse_solution(text: &str, instance: &Instance) -> Result<FullSolution, FormatError> {
    let file: SolutionFile = from_json(text)?;
    check_header(&file.format, file.version, SOLUTION_FORMAT)?;
    solution_from("defences", &file.defences, instance)
}

pub fn load_solution(path: &Path, instance: &Instance) -> Result<FullSolution, FormatError> {
    parse_solution(&read(path)?, instance).map_err(in_file(path))
}

pub fn save_solution(
    path: &Path,
    solution: &FullSolution,
    objectives: &[Objective],
    values: Option<&ObjectiveVector>,
) -> Result<(), FormatError> {
    write(path, solution_to_json(solution, objectives, values).as_bytes())
}

/// A violation with 1-based ids.
pub fn describe_violation(v: &Violation) -> String {
    match *v {
        Violation::NotEligible { defence, role, member } => {
            format!("member {} is not eligible for role {} of defence {}", member + 1, role + 1, defence + 1)
        }
        Violation::DuplicateMember { defence, member } => {
            format!("member {} appears twice in the committee of defence {}", member + 1, defence + 1)
        }
        Violation::DayOverrun { defence } => format!("defence {} runs past the end of its day", defence + 1),
        Violation::Unavailable { defence, member, day, slot } => format!(
            "member {} of defence {} is unavailable on day {} slot {}",
            member + 1,
            defence + 1,
            day + 1,
            slot + 1
        ),
        Violation::MemberOverlap { member, first, second } => format!(
            "member {} sits in overlapping defences {} and {}",
            member + 1,
            first + 1,
            second + 1
        ),
        Violation::RoomOverlap { room, first, second } => {
            format!("room {} holds overlapping defences {} and {}", room + 1, first + 1, second + 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontSolutionFile {
    pub id: u64,
    pub objectives: Vec<i64>,
    pub status: String,
    pub defences: Vec<AssignmentFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontFile {
    pub format: String,
    pub version: u32,
    pub objectives: Vec<String>,
    pub solutions: Vec<FrontSolutionFile>,
}

/// A front member with the data needed to write it out.
pub struct FrontMember<'a> {
    pub id: u64,
    pub objectives: &'a ObjectiveVector,
    pub status: &'a str,
    pub solution: &'a FullSolution,
}

pub fn front_to_json(objectives: &[Objective], members: &[FrontMember<'_>]) -> String {
    to_json(&FrontFile {
        format: FRONT_FORMAT.into(),
        version: FORMAT_VERSION,
        objectives: objectives.iter().map(|o| o.name().to_string()).collect(),
        solutions: members
            .iter()
            .map(|m| FrontSolutionFile {
                id: m.id,
                objectives: m.objectives.0.clone(),
                status: m.status.to_string(),
                defences: assignments(m.solution),
            })
            .collect(),
    })
}

/// Objective names plus `(id, objectives, solution)` per front member.
pub type ParsedFront = (Vec<String>, Vec<(u64, ObjectiveVector, FullSolution)>);

/// Reads the solutions of a front JSON file.
pub fn parse_front_json(text: &str, instance: &Instance) -> Result<ParsedFront, FormatError> {
    let file: FrontFile = from_json(text)?;
    check_header(&file.format, file.version, FRONT_FORMAT)?;
    let mut out = Vec::with_capacity(file.solutions.len());
    for (k, s) in file.solutions.iter().enumerate() {
        let solution = solution_from(&format!("solutions[{k}].defences"), &s.defences, instance)?;
        out.push((s.id, ObjectiveVector(s.objectives.clone()), solution));
    }
    Ok((file.objectives, out))
}

/// One row per front member: objective columns, then the solution id that
/// keys into the front JSON.
pub fn front_to_csv(objectives: &[String], archive: &FrontArchive) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = objectives.iter().map(String::as_str).collect();
    header.push("solution");
    w.write_record(&header)?;
    for e in archive.entries() {
        let mut row: Vec<String> = e.objectives.as_slice().iter().map(i64::to_string).collect();
        row.push(e.payload.to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

pub fn parse_front_csv(text: &str) -> Result<(Vec<String>, FrontArchive), FormatError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.last().map(String::as_str) != Some("solution") || header.len() < 2 {
        return Err(FormatError::Header(format!(
            "expected objective columns followed by `solution`, found {header:?}"
        )));
    }
    let names = header[..header.len() - 1].to_vec();
    let mut entries = Vec::new();
    for (n, record) in r.records().enumerate() {
        let record = record?;
        let parse = |c: usize| -> Result<&str, FormatError> {
            record.get(c).ok_or_else(|| field_error(format!("row {}", n + 1), "missing column"))
        };
        let mut values = Vec::with_capacity(names.len());
        for (c, name) in names.iter().enumerate() {
            let cell = parse(c)?;
            values.push(cell.trim().parse::<i64>().map_err(|e| {
                field_error(format!("row {} column {name}", n + 1), format!("`{cell}`: {e}"))
            })?);
        }
        let cell = parse(names.len())?;
        let payload = cell
            .trim()
            .parse::<u64>()
            .map_err(|e| field_error(format!("row {} column solution", n + 1), format!("`{cell}`: {e}")))?;
        entries.push(ArchiveEntry { objectives: ObjectiveVector(values), payload });
    }
    Ok((names, FrontArchive::new(entries)))
}

pub fn load_front_csv(path: &Path) -> Result<(Vec<String>, FrontArchive), FormatError> {
    parse_front_csv(&read(path)?).map_err(in_file(path))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, FormatError> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    write(path, text.as_bytes())
}

/// Rows rendered through serde into CSV text.
pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    finish(w)
}

/// Pairwise projections of a front, one CSV per objective pair. Each row
/// carries whether the point stays non-dominated in that two-objective view.
pub fn tradeoffs_to_csv(names: &[String], archive: &FrontArchive) -> Result<Vec<(String, String)>, FormatError> {
    let mut out = Vec::new();
    for a in 0..names.len() {
        for b in a + 1..names.len() {
            let points: Vec<[i64; 2]> =
                archive.entries().iter().map(|e| [e.objectives[a], e.objectives[b]]).collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([names[a].as_str(), names[b].as_str(), "solution", "nondominated_in_view"])?;
            for (e, p) in archive.entries().iter().zip(&points) {
                let kept = !points.iter().any(|q| dominates(q, p));
                w.write_record([
                    p[0].to_string(),
                    p[1].to_string(),
                    e.payload.to_string(),
                    u8::from(kept).to_string(),
                ])?;
            }
            let text = finish(w)?;
            out.push((format!("tradeoff_{}_{}.csv", names[a], names[b]), text));
        }
    }
    Ok(out)
}
