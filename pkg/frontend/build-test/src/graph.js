/**
 * Concept-map rendering: layered left-to-right by prerequisite depth (the
 * natural reading direction of the map), prerequisite edges solid, supporting
 * edges dashed, node fill from the served overlay statuses.
 */
import { conceptColor } from "./colors.js";
const NODE_WIDTH = 170;
const NODE_HEIGHT = 44;
const COLUMN_GAP = 70;
const ROW_GAP = 26;
const MARGIN = 16;
/** Longest prerequisite chain ending at each concept (roots sit at depth 0). */
export function prerequisiteDepths(model) {
    const parents = new Map();
    for (const concept of model.concepts) {
        parents.set(concept.id, []);
    }
    for (const edge of model.edges) {
        if (edge.kind === "prerequisite" && parents.has(edge.from) && parents.has(edge.to)) {
            parents.get(edge.to).push(edge.from);
        }
    }
    const depths = new Map();
    const visiting = new Set();
    const depthOf = (id) => {
        const known = depths.get(id);
        if (known !== undefined) {
            return known;
        }
        if (visiting.has(id)) {
            return 0; // cycles cannot occur in validated models; stay safe anyway
        }
        visiting.add(id);
        const ps = parents.get(id) ?? [];
        const depth = ps.length === 0 ? 0 : 1 + Math.max(...ps.map(depthOf));
        visiting.delete(id);
        depths.set(id, depth);
        return depth;
    };
    for (const concept of model.concepts) {
        depthOf(concept.id);
    }
    return depths;
}
export function layoutGraph(model, courseConcepts, overlay) {
    const depths = prerequisiteDepths(model);
    const course = new Set(courseConcepts);
    const byLayer = new Map();
    for (const concept of [...model.concepts].sort((a, b) => a.id.localeCompare(b.id))) {
        const depth = depths.get(concept.id) ?? 0;
        const layer = byLayer.get(depth) ?? [];
        layer.push(concept.id);
        byLayer.set(depth, layer);
    }
    const positions = new Map();
    let maxRows = 1;
    for (const [depth, ids] of byLayer) {
        maxRows = Math.max(maxRows, ids.length);
        ids.forEach((id, row) => {
            positions.set(id, {
                x: MARGIN + depth * (NODE_WIDTH + COLUMN_GAP),
                y: MARGIN + row * (NODE_HEIGHT + ROW_GAP),
            });
        });
    }
    const titleOf = new Map(model.concepts.map((c) => [c.id, c.title]));
    const nodes = [...positions.entries()]
        .sort(([a], [b]) => a.localeCompare(b))
        .map(([id, pos]) => {
        let color = "white";
        if (overlay !== null) {
            const concept = model.concepts.find((c) => c.id === id);
            const statuses = concept.outcomes
                .map((lo) => overlay.statuses[lo.id])
                .filter((s) => s !== undefined);
            color = conceptColor(statuses);
        }
        return {
            id,
            title: titleOf.get(id) ?? id,
            x: pos.x,
            y: pos.y,
            width: NODE_WIDTH,
            height: NODE_HEIGHT,
            color,
            dashed: !course.has(id),
        };
    });
    const edges = [...model.edges]
        .sort((a, b) => a.kind === b.kind
        ? `${a.from}>${a.to}`.localeCompare(`${b.from}>${b.to}`)
        : a.kind === "prerequisite"
            ? -1
            : 1)
        .flatMap((edge) => {
        const from = positions.get(edge.from);
        const to = positions.get(edge.to);
        if (!from || !to) {
            return [];
        }
        return [
            {
                from: edge.from,
                to: edge.to,
                kind: edge.kind,
                x1: from.x + NODE_WIDTH,
                y1: from.y + NODE_HEIGHT / 2,
                x2: to.x,
                y2: to.y + NODE_HEIGHT / 2,
            },
        ];
    });
    const layers = byLayer.size || 1;
    return {
        nodes,
        edges,
        width: MARGIN * 2 + layers * NODE_WIDTH + (layers - 1) * COLUMN_GAP,
        height: MARGIN * 2 + maxRows * NODE_HEIGHT + (maxRows - 1) * ROW_GAP,
    };
}
export function escapeXml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}
export function renderGraphSvg(model, courseConcepts, overlay) {
    const layout = layoutGraph(model, courseConcepts, overlay);
    const parts = [
        `<svg viewBox="0 0 ${layout.width} ${layout.height}" width="${layout.width}" ` +
            `height="${layout.height}" xmlns="http://www.w3.org/2000/svg">`,
        `<defs><marker id="arrow" viewBox="0 0 8 8" refX="8" refY="4" markerWidth="7" ` +
            `markerHeight="7" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="#444"/></marker></defs>`,
    ];
    for (const edge of layout.edges) {
        const dash = edge.kind === "supporting" ? ` stroke-dasharray="6 4"` : "";
        parts.push(`<line data-edge="${escapeXml(edge.from)}->${escapeXml(edge.to)}" data-kind="${edge.kind}" ` +
            `x1="${edge.x1}" y1="${edge.y1}" x2="${edge.x2}" y2="${edge.y2}" ` +
            `stroke="#444" stroke-width="1.5"${dash} marker-end="url(#arrow)"/>`);
    }
    for (const node of layout.nodes) {
        const dash = node.dashed ? ` stroke-dasharray="5 3"` : "";
        parts.push(`<g data-concept="${escapeXml(node.id)}" data-color="${node.color}">` +
            `<rect x="${node.x}" y="${node.y}" width="${node.width}" height="${node.height}" rx="6" ` +
            `fill="${node.color}" fill-opacity="0.55" stroke="#222"${dash}/>` +
            `<text x="${node.x + node.width / 2}" y="${node.y + node.height / 2 + 4}" ` +
            `text-anchor="middle" font-size="11">${escapeXml(node.title)}</text></g>`);
    }
    parts.push("</svg>");
    return parts.join("\n");
}
