// Headless session driver for round-trip checks:
//   node scripted-session.js <segments.json> <clicks.json> <out.json>
// clicks.json is an array with one absolute sample index per segment.

import { readFileSync, writeFileSync } from "node:fs";

import { parseSegmentFile, serializeAnnotations } from "../src/format.js";
import { AnnotationSession } from "../src/session.js";

function main(argv: string[]): number {
    if (argv.length !== 3) {
        console.error("usage: scripted-session <segments.json> <clicks.json> <out.json>");
        return 2;
    }
    const [segmentsPath, clicksPath, outPath] = argv;
    const file = parseSegmentFile(readFileSync(segmentsPath, "utf-8"));
    const clicks = JSON.parse(readFileSync(clicksPath, "utf-8")) as number[];
    if (!Array.isArray(clicks) || clicks.length !== file.segments.length) {
        console.error(
            `need exactly one click per segment (${file.segments.length}), ` +
            `got ${Array.isArray(clicks) ? clicks.length : typeof clicks}`,
        );
        return 1;
    }
    const session = new AnnotationSession(file, "scripted");
    clicks.forEach((click, i) => {
        session.goTo(i);
        session.recordLabel(i, click);
    });
    const { annotations } = session.exportAnnotations(new Date().toISOString());
    writeFileSync(outPath, serializeAnnotations(annotations));
    console.log(`wrote ${annotations.b_points.length} labels to ${outPath}`);
    return 0;
}

process.exit(main(process.argv.slice(2)));
