"""
Deterministic, seed-driven resume fixture generator.

Each fixture carries positioned text primitives, the line order a
correct linearization must produce, and the ground-truth record,
so every pipeline stage can be tested end to end without any real
documents or any model.  Content comes from fixed pools via seeded
sampling: the same (seed, template, pools) always yields a
byte-identical fixture.

Geometry is laid out so the default detector's thresholds are
respected by construction: lines within a column sit closer than the
vertical split threshold, columns sit farther apart than the
horizontal one, and the header clears the body by more than a line
gap.  Pool values are kept in canonical form (dates as YYYY-MM,
organization names without legal-form suffixes) so refinement is a
no-op on clean records.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from .doc_model import BoundingBox, LineRange, TextPrimitive
from .errors import EmptyPool
from .extract.records import BasicInfo, EducationEntry, ResumeRecord, WorkEntry
from .ingest import PageGeometry

PAGE_WIDTH = 595.0
PAGE_HEIGHT = 842.0
LINE_HEIGHT = 10.0
LEADING = 14.0
SECTION_GAP = 8.0  # extra space above a section header; keeps gaps below split threshold
CHAR_WIDTH = 5.2
HEADER_TOP = 40.0
BODY_TOP = 104.0


class LayoutKind(Enum):
    LINEAR = "linear"
    TWO_COLUMN = "two-column"
    SIDEBAR_RIGHT = "sidebar"


@dataclass(frozen=True)
class ResumeTemplate:
    """Column geometry and section placement for one fixture family."""

    layout_kind: LayoutKind
    header_box: BoundingBox
    main_box: BoundingBox
    side_box: BoundingBox | None
    main_sections: tuple[str, ...]
    side_sections: tuple[str, ...]
    work_entries: tuple[int, int] = (2, 3)
    education_entries: tuple[int, int] = (1, 2)

    def __post_init__(self) -> None:
        if self.side_box is not None and self.main_box.intersection_area(self.side_box) > 0:
            raise ValueError("main and side column slots must not overlap")


def linear_template(
    work_entries: tuple[int, int] = (2, 3),
    education_entries: tuple[int, int] = (1, 2),
) -> ResumeTemplate:
    return ResumeTemplate(
        layout_kind=LayoutKind.LINEAR,
        header_box=BoundingBox(50, HEADER_TOP, 545, 90),
        main_box=BoundingBox(50, BODY_TOP, 545, 800),
        side_box=None,
        main_sections=("education", "work", "skills", "summary"),
        side_sections=(),
        work_entries=work_entries,
        education_entries=education_entries,
    )


def two_column_template(
    work_entries: tuple[int, int] = (2, 3),
    education_entries: tuple[int, int] = (1, 2),
) -> ResumeTemplate:
    return ResumeTemplate(
        layout_kind=LayoutKind.TWO_COLUMN,
        header_box=BoundingBox(50, HEADER_TOP, 545, 90),
        main_box=BoundingBox(50, BODY_TOP, 280, 800),
        side_box=BoundingBox(315, BODY_TOP, 545, 800),
        main_sections=("education", "work"),
        side_sections=("skills", "summary"),
        work_entries=work_entries,
        education_entries=education_entries,
    )


def sidebar_template(
    work_entries: tuple[int, int] = (2, 3),
    education_entries: tuple[int, int] = (1, 2),
) -> ResumeTemplate:
    return ResumeTemplate(
        layout_kind=LayoutKind.SIDEBAR_RIGHT,
        header_box=BoundingBox(50, HEADER_TOP, 545, 90),
        main_box=BoundingBox(50, BODY_TOP, 380, 800),
        side_box=BoundingBox(420, BODY_TOP, 545, 800),
        main_sections=("education", "work"),
        side_sections=("skills", "summary"),
        work_entries=work_entries,
        education_entries=education_entries,
    )


TEMPLATES = {
    LayoutKind.LINEAR: linear_template,
    LayoutKind.TWO_COLUMN: two_column_template,
    LayoutKind.SIDEBAR_RIGHT: sidebar_template,
}


@dataclass(frozen=True)
class ContentPools:
    names: tuple[str, ...]
    companies: tuple[str, ...]
    positions: tuple[str, ...]
    schools: tuple[str, ...]
    majors: tuple[str, ...]
    degrees: tuple[str, ...]
    cities: tuple[str, ...]
    job_intentions: tuple[str, ...]
    skills: tuple[str, ...]
    summary_sentences: tuple[str, ...]
    description_sentences: tuple[str, ...]
    email_domains: tuple[str, ...]


def default_pools() -> ContentPools:
    return ContentPools(
        names=(
            "Gu Dabai", "Wei Zhang", "Li Xiaomei", "Chen Haoran", "Alex Morgan",
            "Sun Yating", "Zhao Mingyu", "Lin Jiahao", "Maria Santos", "Wang Shu",
            "Deng Zihan", "Priya Nair", "Xu Feifei", "Tomas Berg", "He Junjie",
            "Ivy Luo",
        ),
        companies=(
            "Rainbow Network", "Haichao Consulting", "Blue Harbor Analytics",
            "Silverpine Technologies", "Northwind Logistics", "Quantum Leaf Labs",
            "Golden Bridge Media", "Starfall Robotics", "Evergreen Financial",
            "Redstone Mobility", "Cloudvale Systems", "Brightriver Commerce",
            "Lakeshore Biotech", "Summit Grid Energy", "Papercrane Studio",
            "Ironwood Security",
        ),
        positions=(
            "Backend Engineer", "New Media Operations Director", "Senior Consultant",
            "Data Analyst", "Product Manager", "Algorithm Engineer",
            "Marketing Specialist", "QA Engineer", "Site Reliability Engineer",
            "Business Development Manager", "UX Designer", "Machine Learning Engineer",
        ),
        schools=(
            "Hebei University of Science and Technology", "Tsinghua University",
            "Zhejiang University", "Fudan University", "Wuhan University",
            "Shanghai Jiao Tong University", "Sichuan University", "Nankai University",
            "Xiamen University", "Harbin Institute of Technology",
            "Sun Yat-sen University", "Tongji University",
        ),
        majors=(
            "Information Management and Information Systems", "Computer Science",
            "Software Engineering", "Electronic Engineering", "Applied Mathematics",
            "Business Administration", "Industrial Design", "Communication Studies",
            "Statistics", "Mechanical Engineering", "Finance", "Automation",
        ),
        degrees=("Bachelor", "Master", "PhD"),
        cities=(
            "Hangzhou", "Beijing", "Shanghai", "Shenzhen", "Chengdu", "Wuhan",
            "Nanjing", "Suzhou", "Guangzhou", "Xian", "Qingdao", "Changsha",
        ),
        job_intentions=(
            "New Media Operations", "Algorithm Engineer", "Backend Development",
            "Product Management", "Data Engineering", "Growth Marketing",
            "Quality Assurance", "Technical Writing", "Solution Architecture",
            "Platform Operations",
        ),
        skills=(
            "Python", "Distributed systems", "SQL and data warehousing",
            "Public speaking", "Kubernetes", "Copywriting", "A/B testing",
            "Financial modeling", "Figma prototyping", "Go services",
            "Team leadership", "Vendor negotiation",
        ),
        summary_sentences=(
            "Creative and curious thinker", "Keen on digital marketing trends",
            "Highly organized and responsible", "Strong teamwork and execution",
            "Comfortable with ambiguity", "Fast learner across domains",
            "Data-driven decision maker", "Calm under production pressure",
        ),
        description_sentences=(
            "Managed multiple social media accounts across major platforms",
            "Led online and offline brand campaigns with media partners",
            "Organized livestream events reaching millions of viewers",
            "Grew follower base by six figures annually per account",
            "Assisted public relations and brand image development",
            "Participated in project management and business analysis",
            "Built client profiles and internal data processing tools",
            "Migrated legacy billing services onto a container platform",
            "Designed review dashboards used by three downstream teams",
            "Cut nightly batch runtime by rewriting the scheduling layer",
            "Owned the on-call rotation for the payments gateway",
            "Interviewed customers and turned findings into roadmap items",
            "Shipped a self-serve onboarding flow for enterprise tenants",
            "Negotiated data sharing agreements with two upstream vendors",
            "Profiled and removed the top three query hotspots",
            "Coordinated a five-person squad through quarterly planning",
            "Wrote the internal style guide for analytics event naming",
            "Launched referral experiments that lifted signups measurably",
            "Maintained the feature store powering ranking models",
            "Drove incident postmortems and tracked remediation work",
            "Consolidated vendor spend into a single procurement pipeline",
            "Prototyped voice-of-customer tooling adopted company wide",
            "Rolled out schema linting across four hundred pipelines",
            "Mentored two junior analysts through their first launches",
            "Rebuilt the experiment assignment service for reproducibility",
            "Introduced error budgets and burn-rate alerts for core APIs",
            "Automated weekly revenue reconciliation with finance",
            "Curated the quarterly customer advisory board sessions",
            "Reduced image build times through aggressive layer caching",
            "Standardized feature flags and their cleanup policy",
            "Benchmarked storage engines for the event ingestion path",
            "Localized the checkout flow for three new markets",
            "Hardened session handling after a third-party audit",
            "Streamlined contract review with a clause template library",
            "Instrumented funnel analytics for the mobile signup flow",
            "Piloted a lightweight design review process for the guild",
            "Documented capacity planning runbooks for peak season",
            "Unified logging fields across seven microservices",
            "Ran the migration off the deprecated message broker",
            "Built regression suites guarding the pricing engine",
            "Partnered with legal on data retention enforcement",
            "Tuned autoscaling policies ahead of campaign spikes",
            "Refreshed the employer brand pages with hiring teams",
            "Scoped and delivered the partner settlement reports",
            "Championed accessibility fixes across the web console",
            "Calibrated lead scoring with the sales operations team",
            "Drafted the quarterly OKR review deck for leadership",
            "Swept dormant feature branches into an archival policy",
        ),
        email_domains=("example.com", "mail.test", "inbox.dev"),
    )


DEFAULT_POOLS = default_pools()

# Deliberately disjoint from the regular pools so injected entities can
# never collide with genuine ones.
HALLUCINATED_COMPANIES = ("Phantom Dynamics", "Nullpoint Ventures", "Mirage Syndicate")
HALLUCINATED_POSITIONS = ("Chief Imagination Officer", "Director of Unwritten Plans")
HALLUCINATED_SENTENCES = (
    "Invented achievements that appear in no source document anywhere",
    "Supervised an initiative that was never actually mentioned",
)


@dataclass(frozen=True)
class SynthFixture:
    primitives: tuple[TextPrimitive, ...]
    expected_lines: tuple[str, ...]
    truth: ResumeRecord
    seed: int
    page: PageGeometry
    layout_kind: LayoutKind


def _require(pool: Sequence[str], name: str) -> None:
    if not pool:
        raise EmptyPool(f"content pool {name!r} is empty")


def _period(rng: random.Random, earliest_year: int = 2008) -> tuple[str, str]:
    start_year = rng.randint(earliest_year, 2019)
    start_month = rng.randint(1, 12)
    months = rng.randint(10, 40)
    total = start_year * 12 + (start_month - 1) + months
    end_year, end_month = divmod(total, 12)
    return (
        f"{start_year:04d}-{start_month:02d}",
        f"{end_year:04d}-{end_month + 1:02d}",
    )


def _email_for(name: str, rng: random.Random, domains: tuple[str, ...]) -> str:
    slug = "".join(part.lower() for part in name.split())
    return f"{slug}{rng.randint(10, 99)}@{rng.choice(domains)}"


def _phone(rng: random.Random) -> str:
    return "1" + "".join(str(rng.randint(0, 9)) for _ in range(10))


@dataclass
class _Column:
    """Mutable layout cursor for one column slot."""

    box: BoundingBox
    y: float
    lines: list[tuple[str, BoundingBox]] = field(default_factory=list)

    def add(self, text: str, extra_gap: float = 0.0) -> int:
        self.y += extra_gap
        width = min(len(text) * CHAR_WIDTH, self.box.width)
        bbox = BoundingBox(
            self.box.x_min, self.y, self.box.x_min + width, self.y + LINE_HEIGHT
        )
        self.lines.append((text, bbox))
        self.y += LEADING
        return len(self.lines) - 1


def generate(
    seed: int,
    template: ResumeTemplate | None = None,
    pools: ContentPools = DEFAULT_POOLS,
) -> SynthFixture:
    """Build one fixture; identical inputs give byte-identical outputs."""
    template = template or linear_template()
    for pool_name in (
        "names", "companies", "positions", "schools", "majors", "degrees",
        "cities", "job_intentions", "skills", "summary_sentences",
        "description_sentences", "email_domains",
    ):
        _require(getattr(pools, pool_name), pool_name)

    rng = random.Random(seed)

    name = rng.choice(pools.names)
    email = _email_for(name, rng, pools.email_domains)
    phone = _phone(rng)
    gender = rng.choice(("Male", "Female", "")) if rng.random() < 0.75 else ""
    age = str(rng.randint(22, 45)) if rng.random() < 0.4 else ""
    born = f"{rng.randint(1975, 2000):04d}-{rng.randint(1, 12):02d}" if rng.random() < 0.5 else ""
    job_intention = rng.choice(pools.job_intentions) if rng.random() < 0.8 else ""
    current_location = rng.choice(pools.cities) if rng.random() < 0.8 else ""
    place_of_origin = rng.choice(pools.cities) if rng.random() < 0.4 else ""
    desired = tuple(rng.sample(pools.cities, rng.randint(0, 2)))

    n_education = rng.randint(*template.education_entries)
    n_work = rng.randint(*template.work_entries)

    education = []
    for school in rng.sample(pools.schools, n_education):
        start, end = _period(rng, earliest_year=2004)
        education.append(
            EducationEntry(
                school=school,
                major=rng.choice(pools.majors),
                degree=rng.choice(pools.degrees),
                start_date=start,
                end_date=end,
                location=rng.choice(pools.cities),
            )
        )

    sentence_bank = list(pools.description_sentences)
    rng.shuffle(sentence_bank)
    work = []
    for entry_idx, company in enumerate(rng.sample(pools.companies, n_work)):
        start, end = _period(rng)
        if entry_idx == 0 and rng.random() < 0.4:
            end = "present"
        n_sentences = rng.randint(2, 4)
        if len(sentence_bank) < n_sentences:
            raise EmptyPool("description sentence pool exhausted")
        sentences = [sentence_bank.pop() for _ in range(n_sentences)]
        work.append(
            WorkEntry(
                company=company,
                position=rng.choice(pools.positions),
                start_date=start,
                end_date=end,
                location=rng.choice(pools.cities),
                description="\n".join(sentences),
            )
        )

    # Header: exactly three lines so the header/body gap stays a clean cut.
    header_parts_2 = [f"Phone: {phone}", f"Email: {email}"]
    if age:
        header_parts_2.append(f"Age: {age}")
    if born:
        header_parts_2.append(f"Born: {born}")
    header_parts_3 = []
    if job_intention:
        header_parts_3.append(f"Objective: {job_intention}")
    if current_location:
        header_parts_3.append(f"Location: {current_location}")
    if place_of_origin:
        header_parts_3.append(f"Hometown: {place_of_origin}")
    if desired:
        header_parts_3.append("Preferred: " + ", ".join(desired))
    if not header_parts_3:
        header_parts_3.append("Open to opportunities")
    header_lines = [
        name + (f"  Gender: {gender}" if gender else ""),
        "  ".join(header_parts_2),
        "  ".join(header_parts_3),
    ]

    header = _Column(template.header_box, HEADER_TOP)
    for text in header_lines:
        header.add(text)

    main = _Column(template.main_box, BODY_TOP)
    side = _Column(template.side_box, BODY_TOP) if template.side_box else None

    # Positions of description lines, recorded per work entry while the
    # main column is laid out; turned into document-global indices below.
    desc_positions: list[tuple[int, int]] = []

    def emit_section(column: _Column, section: str) -> None:
        first_in_column = not column.lines
        gap = 0.0 if first_in_column else SECTION_GAP
        if section == "education":
            column.add("Education", extra_gap=gap)
            for entry in education:
                column.add(f"{entry.start_date} - {entry.end_date}  {entry.school}")
                column.add(f"{entry.major}, {entry.degree}, {entry.location}")
        elif section == "work":
            column.add("Work Experience", extra_gap=gap)
            for entry in work:
                column.add(f"{entry.start_date} - {entry.end_date}  {entry.company}")
                column.add(f"{entry.position}, {entry.location}")
                sentences = entry.description.split("\n")
                first = column.add(sentences[0])
                last = first
                for sentence in sentences[1:]:
                    last = column.add(sentence)
                desc_positions.append((first, last))
        elif section == "skills":
            column.add("Skills", extra_gap=gap)
            for skill in rng.sample(pools.skills, rng.randint(4, 6)):
                column.add(skill)
        elif section == "summary":
            column.add("Summary", extra_gap=gap)
            for sentence in rng.sample(pools.summary_sentences, rng.randint(3, 5)):
                column.add(sentence)
        else:
            raise ValueError(f"unknown section {section!r}")

    for section in template.main_sections:
        emit_section(main, section)
    if side is not None:
        for section in template.side_sections:
            emit_section(side, section)
        # Pad the sidebar to the main column's depth so a naive global
        # sort is guaranteed to interleave the two columns.
        filler = 0
        while side.y < main.y:
            skill = pools.skills[filler % len(pools.skills)]
            side.add(f"{skill} ({filler + 1} yrs)")
            filler += 1

    columns = [header, main] + ([side] if side is not None else [])
    expected_lines: list[str] = []
    primitives: list[TextPrimitive] = []
    for column in columns:
        for text, bbox in column.lines:
            expected_lines.append(text)
            primitives.append(TextPrimitive(text=text, bbox=bbox, page=0))

    main_offset = len(header.lines)
    work_with_ranges = tuple(
        replace(
            entry,
            description_range=LineRange(main_offset + first, main_offset + last),
        )
        for entry, (first, last) in zip(work, desc_positions)
    )

    truth = ResumeRecord(
        basic=BasicInfo(
            name=name,
            personal_email=email,
            phone_number=phone,
            age=age,
            born=born,
            gender=gender,
            job_intention=job_intention,
            current_location=current_location,
            place_of_origin=place_of_origin,
            desired_location=desired,
        ),
        education=tuple(education),
        work=work_with_ranges,
    )

    fixture = SynthFixture(
        primitives=tuple(primitives),
        expected_lines=tuple(expected_lines),
        truth=truth,
        seed=seed,
        page=PageGeometry(0, PAGE_WIDTH, PAGE_HEIGHT),
        layout_kind=template.layout_kind,
    )
    _check_truth_in_primitives(fixture)
    return fixture


def _check_truth_in_primitives(fixture: SynthFixture) -> None:
    joined = "\n".join(fixture.expected_lines)
    basic = fixture.truth.basic
    values = [
        basic.name, basic.personal_email, basic.phone_number, basic.age,
        basic.born, basic.gender, basic.job_intention, basic.current_location,
        basic.place_of_origin, *basic.desired_location,
    ]
    for entry in fixture.truth.education:
        values += [entry.school, entry.major, entry.degree, entry.start_date,
                   entry.end_date, entry.location]
    for entry in fixture.truth.work:
        values += [entry.company, entry.position, entry.start_date,
                   entry.end_date, entry.location]
        values += entry.description.split("\n")
    for value in values:
        if value and value not in joined:
            raise AssertionError(f"truth value {value!r} missing from fixture text")


# ---------------------------------------------------------------------------
# Corruption: controlled degradation with a predictable footprint
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DropEntity:
    count: int = 1


@dataclass(frozen=True)
class ShuffleEntities:
    pass


@dataclass(frozen=True)
class PerturbDates:
    count: int = 1


@dataclass(frozen=True)
class HallucinateEntity:
    pass


@dataclass(frozen=True)
class TruncateDescription:
    fraction: float = 0.3

    def __post_init__(self) -> None:
        # Above ~0.8 the remaining text may still clear the long-text
        # similarity threshold, making the manifest unreliable.
        if not 0.0 < self.fraction <= 0.8:
            raise ValueError("truncation fraction must be in (0, 0.8]")


CorruptionSpec = (
    DropEntity | ShuffleEntities | PerturbDates | HallucinateEntity | TruncateDescription
)


@dataclass(frozen=True)
class CorruptionManifest:
    """Exact per-field footprint of one corruption.

    ``removed_fields`` lose their correct outcome entirely (entity gone
    from the prediction), ``spurious_fields`` gain an unmatched
    prediction, ``wrong_fields`` flip from correct to aligned-but-wrong.
    """

    kind: str
    removed_fields: tuple[str, ...] = ()
    spurious_fields: tuple[str, ...] = ()
    wrong_fields: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "removed_fields": list(self.removed_fields),
            "spurious_fields": list(self.spurious_fields),
            "wrong_fields": list(self.wrong_fields),
        }


_WORK_FIELD_NAMES = ("company", "position", "start_date", "end_date", "location", "description")


def _participating_work_fields(entry: WorkEntry) -> list[str]:
    return [f"work.{name}" for name in _WORK_FIELD_NAMES if getattr(entry, name)]


def corrupt(
    fixture: SynthFixture, spec: CorruptionSpec, seed: int = 0
) -> tuple[ResumeRecord, CorruptionManifest]:
    """Deterministically degrade a copy of the fixture's truth record."""
    rng = random.Random(seed)
    truth = fixture.truth

    if isinstance(spec, ShuffleEntities):
        work = list(truth.work)
        education = list(truth.education)
        rng.shuffle(work)
        rng.shuffle(education)
        record = replace(truth, work=tuple(work), education=tuple(education))
        return record, CorruptionManifest(kind="shuffle_entities")

    if isinstance(spec, DropEntity):
        count = min(spec.count, len(truth.work))
        dropped = sorted(rng.sample(range(len(truth.work)), count))
        removed: list[str] = []
        for idx in dropped:
            removed.extend(_participating_work_fields(truth.work[idx]))
        work = tuple(e for i, e in enumerate(truth.work) if i not in set(dropped))
        record = replace(truth, work=work)
        return record, CorruptionManifest(
            kind="drop_entity", removed_fields=tuple(removed)
        )

    if isinstance(spec, HallucinateEntity):
        start, end = _period(rng)
        entry = WorkEntry(
            company=rng.choice(HALLUCINATED_COMPANIES),
            position=rng.choice(HALLUCINATED_POSITIONS),
            start_date=start,
            end_date=end,
            location="Atlantis",
            description=rng.choice(HALLUCINATED_SENTENCES),
        )
        work = list(truth.work)
        work.insert(rng.randint(0, len(work)), entry)
        record = replace(truth, work=tuple(work))
        return record, CorruptionManifest(
            kind="hallucinate_entity",
            spurious_fields=tuple(_participating_work_fields(entry)),
        )

    if isinstance(spec, PerturbDates):
        slots: list[tuple[str, int, str]] = []
        for idx, entry in enumerate(truth.work):
            for field_name in ("start_date", "end_date"):
                if _is_year_month(getattr(entry, field_name)):
                    slots.append(("work", idx, field_name))
        for idx, entry in enumerate(truth.education):
            for field_name in ("start_date", "end_date"):
                if _is_year_month(getattr(entry, field_name)):
                    slots.append(("education", idx, field_name))
        chosen = rng.sample(slots, min(spec.count, len(slots)))
        work = list(truth.work)
        education = list(truth.education)
        wrong: list[str] = []
        for list_name, idx, field_name in chosen:
            entries = work if list_name == "work" else education
            value = getattr(entries[idx], field_name)
            year, month = value.split("-")
            entries[idx] = replace(
                entries[idx], **{field_name: f"{int(year) + 1:04d}-{month}"}
            )
            wrong.append(f"{list_name}.{field_name}")
        record = replace(truth, work=tuple(work), education=tuple(education))
        return record, CorruptionManifest(
            kind="perturb_dates", wrong_fields=tuple(wrong)
        )

    if isinstance(spec, TruncateDescription):
        work = []
        wrong = []
        for entry in truth.work:
            if entry.description:
                cut = max(1, int(len(entry.description) * spec.fraction))
                work.append(
                    replace(entry, description=entry.description[:cut], description_range=None)
                )
                wrong.append("work.description")
            else:
                work.append(entry)
        record = replace(truth, work=tuple(work))
        return record, CorruptionManifest(
            kind="truncate_description", wrong_fields=tuple(wrong)
        )

    raise TypeError(f"unknown corruption spec: {spec!r}")


def _is_year_month(value: str) -> bool:
    parts = value.split("-")
    return len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit()


def write_fixture(fixture_dir, fixture: SynthFixture) -> None:
    """Materialize one fixture as the on-disk corpus layout e2e consumes."""
    import json
    from pathlib import Path

    from .extract.records import write_record_json
    from .ingest import write_pages_json, write_primitives_jsonl
    from .layout import linearize

    fixture_dir = Path(fixture_dir)
    fixture_dir.mkdir(parents=True, exist_ok=True)
    write_primitives_jsonl(fixture_dir / "fused.jsonl", fixture.primitives)
    write_pages_json(fixture_dir / "pages.json", [fixture.page])
    doc = linearize([fixture.page], fixture.primitives)
    with open(fixture_dir / "indexed.json", "w", encoding="utf-8") as handle:
        json.dump(doc.to_dict(), handle, ensure_ascii=False)
    write_record_json(fixture_dir / "truth.json", fixture.truth)
