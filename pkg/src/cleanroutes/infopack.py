"""Customized information package: the four-section intervention document.

A package is a pure value assembled from a participant's scored routes and
benefit report plus a content catalog of awareness blocks and tips. It renders
losslessly to JSON ("structured") and to a self-contained HTML document
("hypertext") with an inline SVG map; builds are deterministic, so renders of
the same inputs are byte-identical.
"""
from __future__ import annotations

import html
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Sequence

from .benefit import BenefitReport, relative_risk, RiskModel
from .errors import ConsistencyError, InvalidDataError
from .exposure import CATEGORY_COLORS, ExposureCategory, ExposureSummary
from .network import Coord
from .routing import Route

#: Display precision: concentrations to 0.1 ug/m3, lengths to 1 m.
CONC_DECIMALS = 1

SECTION_ORDER = ("context", "feedback", "benefits", "tips")

SECTION_TITLES = {
    "context": "Air quality and your school run",
    "feedback": "Your current route compared with alternatives",
    "benefits": "What switching would do for you",
    "tips": "General tips for avoiding exposure",
}


def fmt_concentration(value: float) -> str:
    return f"{value:.{CONC_DECIMALS}f}"


def fmt_length(value: float) -> str:
    return f"{value:.0f}"


@dataclass(frozen=True)
class ContentBlock:
    id: str
    text: str
    figure_ref: str | None = None


@dataclass(frozen=True)
class ContentCatalog:
    locale: str
    context: tuple[ContentBlock, ...]
    tips: tuple[ContentBlock, ...]


def load_content_catalog(source: bytes | str | IO | Path | None = None) -> ContentCatalog:
    """Content catalog from JSON; defaults to the packaged English sample."""
    if source is None:
        text = resources.files("cleanroutes").joinpath("data/content_catalog.json").read_text("utf-8")
    elif isinstance(source, Path):
        text = source.read_text("utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    raw = json.loads(text)

    def blocks(items) -> tuple[ContentBlock, ...]:
        return tuple(ContentBlock(id=b["id"], text=b["text"], figure_ref=b.get("figure_ref")) for b in items)

    return ContentCatalog(locale=raw.get("locale", "en"), context=blocks(raw.get("context", [])), tips=blocks(raw.get("tips", [])))


@dataclass(frozen=True)
class FeedbackEntry:
    """One row of the quantitative comparison table."""

    label: str
    length_m: float
    mean_ugm3: float
    category: ExposureCategory
    delta_ugm3: float | None  # None for the current-route row


@dataclass(frozen=True)
class BenefitStatement:
    text: str
    model_id: str | None = None
    rr_factor: float | None = None


@dataclass(frozen=True)
class MapRoute:
    label: str
    geometry: tuple[Coord, ...]
    category: ExposureCategory
    color: str  # category color token: green / yellow / red


@dataclass(frozen=True)
class InfoPackage:
    participant_id: str
    section_context: tuple[ContentBlock, ...]
    section_feedback: tuple[FeedbackEntry, ...]
    section_benefits: tuple[BenefitStatement, ...]
    section_tips: tuple[ContentBlock, ...]
    map_payload: tuple[MapRoute, ...]


def build_package(
    participant_id: str,
    current_geometry: Sequence[Coord],
    current_length_m: float,
    alternatives: Sequence[tuple[Route, ExposureSummary]],
    report: BenefitReport,
    catalog: ContentCatalog,
    models: Sequence[RiskModel] = (),
) -> InfoPackage:
    """Assemble the four-section package for one participant.

    ``alternatives`` must be the ranked list the report was computed from;
    inconsistencies (wrong best mean, delta mismatch) raise ConsistencyError.
    """
    if not catalog.tips:
        raise InvalidDataError("content catalog has no tips")
    seen_ids: set[str] = set()
    for block in (*catalog.context, *catalog.tips):
        if not block.id:
            raise InvalidDataError("content block with empty id")
        if block.id in seen_ids:
            raise InvalidDataError(f"duplicate content block id {block.id!r}")
        seen_ids.add(block.id)

    current = report.current
    if alternatives:
        if report.best_alternative is None:
            raise ConsistencyError("report has no best alternative but alternatives were supplied")
        best_mean = alternatives[0][1].mean_concentration
        expected_delta = current.mean_concentration - best_mean
        if report.delta is None or abs(report.delta - expected_delta) > 1e-9:
            raise ConsistencyError(
                f"report delta {report.delta!r} does not equal current - best alternative ({expected_delta!r})"
            )
    elif report.best_alternative is not None:
        raise ConsistencyError("report cites a best alternative but no alternatives were supplied")

    feedback = [
        FeedbackEntry(
            label="current",
            length_m=current_length_m,
            mean_ugm3=current.mean_concentration,
            category=current.category,
            delta_ugm3=None,
        )
    ]
    for i, (route, summary) in enumerate(alternatives, start=1):
        feedback.append(
            FeedbackEntry(
                label=f"alternative {i}",
                length_m=route.length_m,
                mean_ugm3=summary.mean_concentration,
                category=summary.category,
                delta_ugm3=current.mean_concentration - summary.mean_concentration,
            )
        )

    benefits: list[BenefitStatement] = []
    if report.delta is not None:
        frm, to = report.category_shift
        lead = (
            f"Your best alternative lowers mean NO2 exposure by {fmt_concentration(report.delta)} ug/m3 "
            f"({fmt_concentration(current.mean_concentration)} down to "
            f"{fmt_concentration(report.best_alternative.mean_concentration)})."
        )
        if frm != to:
            lead += f" That moves your route from the {frm.label} to the {to.label} exposure category."
        benefits.append(BenefitStatement(text=lead))
        rr_by_id = dict(report.risk_ratios)
        for model in models:
            rr = rr_by_id.get(model.id, relative_risk(report.delta, model))
            benefits.append(
                BenefitStatement(
                    text=(
                        f"Avoided relative risk for {model.endpoint}: factor {rr:.4f} "
                        f"(coefficient {model.rr_per_unit} per {model.unit_delta_ugm3:g} ug/m3)."
                    ),
                    model_id=model.id,
                    rr_factor=rr,
                )
            )
    else:
        benefits.append(
            BenefitStatement(
                text=(
                    "No feasible alternative with lower exposure was found for your route; "
                    "the general tips below still help reduce day-to-day exposure."
                )
            )
        )

    map_routes = [
        MapRoute(
            label="current",
            geometry=tuple(Coord(float(p[0]), float(p[1])) for p in current_geometry),
            category=current.category,
            color=CATEGORY_COLORS[current.category],
        )
    ]
    for i, (route, summary) in enumerate(alternatives, start=1):
        map_routes.append(
            MapRoute(
                label=f"alternative {i}",
                geometry=route.geometry,
                category=summary.category,
                color=CATEGORY_COLORS[summary.category],
            )
        )

    return InfoPackage(
        participant_id=participant_id,
        section_context=catalog.context,
        section_feedback=tuple(feedback),
        section_benefits=tuple(benefits),
        section_tips=catalog.tips,
        map_payload=tuple(map_routes),
    )


def package_to_dict(pkg: InfoPackage) -> dict:
    return {
        "participant_id": pkg.participant_id,
        "section_context": [
            {"id": b.id, "text": b.text, "figure_ref": b.figure_ref} for b in pkg.section_context
        ],
        "section_feedback": [
            {
                "label": e.label,
                "length_m": e.length_m,
                "mean_ugm3": e.mean_ugm3,
                "category": e.category.label,
                "delta_ugm3": e.delta_ugm3,
            }
            for e in pkg.section_feedback
        ],
        "section_benefits": [
            {"text": s.text, "model_id": s.model_id, "rr_factor": s.rr_factor} for s in pkg.section_benefits
        ],
        "section_tips": [{"id": b.id, "text": b.text, "figure_ref": b.figure_ref} for b in pkg.section_tips],
        "map_payload": [
            {
                "label": r.label,
                "geometry": [[p.x, p.y] for p in r.geometry],
                "category": r.category.label,
                "color": r.color,
            }
            for r in pkg.map_payload
        ],
    }


def package_from_dict(data: dict) -> InfoPackage:
    return InfoPackage(
        participant_id=data["participant_id"],
        section_context=tuple(
            ContentBlock(id=b["id"], text=b["text"], figure_ref=b.get("figure_ref"))
            for b in data["section_context"]
        ),
        section_feedback=tuple(
            FeedbackEntry(
                label=e["label"],
                length_m=e["length_m"],
                mean_ugm3=e["mean_ugm3"],
                category=ExposureCategory.from_label(e["category"]),
                delta_ugm3=e["delta_ugm3"],
            )
            for e in data["section_feedback"]
        ),
        section_benefits=tuple(
            BenefitStatement(text=s["text"], model_id=s.get("model_id"), rr_factor=s.get("rr_factor"))
            for s in data["section_benefits"]
        ),
        section_tips=tuple(
            ContentBlock(id=b["id"], text=b["text"], figure_ref=b.get("figure_ref"))
            for b in data["section_tips"]
        ),
        map_payload=tuple(
            MapRoute(
                label=r["label"],
                geometry=tuple(Coord(float(p[0]), float(p[1])) for p in r["geometry"]),
                category=ExposureCategory.from_label(r["category"]),
                color=r["color"],
            )
            for r in data["map_payload"]
        ),
    )


def parse_package(data: bytes | str) -> InfoPackage:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return package_from_dict(json.loads(data))


def _map_svg(map_payload: Sequence[MapRoute], width: int = 640, height: int = 420) -> str:
    """Inline SVG of the route geometries, colored by exposure category."""
    points = [p for r in map_payload for p in r.geometry]
    if not points:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"></svg>'
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {x1 - x0:.1f} {y1 - y0:.1f}" role="img" aria-label="route map">'
    ]
    stroke = {"green": "#2e8b57", "yellow": "#d4a017", "red": "#c0392b"}
    for r in map_payload:
        pts = " ".join(f"{p.x - x0:.1f},{y1 - p.y:.1f}" for p in r.geometry)
        dash = ' stroke-dasharray="6 4"' if r.label != "current" else ""
        parts.append(
            f'<polyline class="route-{r.color}" points="{pts}" fill="none" '
            f'stroke="{stroke[r.color]}" stroke-width="3"{dash}><title>{html.escape(r.label)}</title></polyline>'
        )
    parts.append("</svg>")
    return "".join(parts)


def _html_document(pkg: InfoPackage) -> str:
    e = html.escape
    out: list[str] = []
    out.append("<!doctype html>")
    out.append('<html lang="en"><head><meta charset="utf-8">')
    out.append(f"<title>Route information package for {e(pkg.participant_id)}</title>")
    out.append(
        "<style>body{font-family:sans-serif;max-width:52rem;margin:2rem auto;padding:0 1rem;}"
        "table{border-collapse:collapse;}td,th{border:1px solid #999;padding:0.3rem 0.6rem;text-align:right;}"
        "th:first-child,td:first-child{text-align:left;}figure{margin:1rem 0;}"
        ".cat-low{color:#2e8b57;}.cat-moderate{color:#d4a017;}.cat-high{color:#c0392b;}</style>"
    )
    out.append("</head><body>")
    out.append(f"<h1>Route information package for {e(pkg.participant_id)}</h1>")

    out.append('<section id="context">')
    out.append(f"<h2>{e(SECTION_TITLES['context'])}</h2>")
    for block in pkg.section_context:
        out.append(f'<p data-block="{e(block.id)}">{e(block.text)}</p>')
        if block.figure_ref:
            out.append(f'<figure data-figure-ref="{e(block.figure_ref)}"></figure>')
    out.append("</section>")

    out.append('<section id="feedback">')
    out.append(f"<h2>{e(SECTION_TITLES['feedback'])}</h2>")
    out.append("<table><thead><tr><th>Route</th><th>Length (m)</th><th>Mean NO2 (ug/m3)</th>"
               "<th>Category</th><th>Reduction (ug/m3)</th></tr></thead><tbody>")
    for entry in pkg.section_feedback:
        delta = fmt_concentration(entry.delta_ugm3) if entry.delta_ugm3 is not None else "-"
        out.append(
            "<tr>"
            f"<td>{e(entry.label)}</td>"
            f"<td>{fmt_length(entry.length_m)}</td>"
            f"<td>{fmt_concentration(entry.mean_ugm3)}</td>"
            f'<td class="cat-{entry.category.label}">{e(entry.category.label)}</td>'
            f"<td>{delta}</td>"
            "</tr>"
        )
    out.append("</tbody></table>")
    out.append('<figure class="map" aria-label="map of routes">')
    out.append(_map_svg(pkg.map_payload))
    out.append("<figcaption>Current route (solid) and alternatives (dashed), colored by exposure category.</figcaption></figure>")
    out.append("</section>")

    out.append('<section id="benefits">')
    out.append(f"<h2>{e(SECTION_TITLES['benefits'])}</h2>")
    for stmt in pkg.section_benefits:
        attrs = f' data-model="{e(stmt.model_id)}"' if stmt.model_id else ""
        out.append(f"<p{attrs}>{e(stmt.text)}</p>")
    out.append("</section>")

    out.append('<section id="tips">')
    out.append(f"<h2>{e(SECTION_TITLES['tips'])}</h2>")
    out.append("<ul>")
    for block in pkg.section_tips:
        out.append(f'<li data-block="{e(block.id)}">{e(block.text)}</li>')
    out.append("</ul>")
    out.append("</section>")

    out.append("</body></html>")
    return "\n".join(out)


def render_package(pkg: InfoPackage, fmt: str) -> bytes:
    """Serialize a package: 'structured' (lossless JSON) or 'hypertext' (self-contained HTML)."""
    if fmt == "structured":
        return json.dumps(package_to_dict(pkg), sort_keys=True, separators=(",", ":")).encode("utf-8")
    if fmt == "hypertext":
        return _html_document(pkg).encode("utf-8")
    raise InvalidDataError(f"unknown package format {fmt!r}")
