// Parsing of segment files and serialization of annotation exports.

import { AnnotationExport, DETECTOR_FIELDS, FormatError, SegmentFile, SegmentRecord } from "./types.js";

function requireNumber(value: unknown, what: string): number {
    if (typeof value !== "number" || !Number.isFinite(value)) {
        throw new FormatError(`${what} must be a finite number, got ${JSON.stringify(value)}`);
    }
    return value;
}

function parseSegment(raw: unknown, index: number): SegmentRecord {
    if (typeof raw !== "object" || raw === null) {
        throw new FormatError(`segment ${index} is not an object`);
    }
    const record = raw as Record<string, unknown>;
    for (const field of DETECTOR_FIELDS) {
        if (field in record) {
            throw new FormatError(
                `segment ${index} carries detector field "${field}"; refusing to break blinding`,
            );
        }
    }
    const samples = record.samples;
    if (!Array.isArray(samples) || samples.length === 0) {
        throw new FormatError(`segment ${index} has no samples`);
    }
    samples.forEach((v, i) => requireNumber(v, `segment ${index} sample ${i}`));
    return {
        c_index: requireNumber(record.c_index, `segment ${index} c_index`),
        start_index: requireNumber(record.start_index, `segment ${index} start_index`),
        samples: samples as number[],
        clipped: Boolean(record.clipped),
    };
}

export function parseSegmentFile(text: string): SegmentFile {
    let data: unknown;
    try {
        data = JSON.parse(text);
    } catch (err) {
        throw new FormatError(`not valid JSON: ${(err as Error).message}`);
    }
    if (typeof data !== "object" || data === null) {
        throw new FormatError("expected a JSON object at top level");
    }
    const record = data as Record<string, unknown>;
    if (!Array.isArray(record.segments)) {
        throw new FormatError("missing segments array");
    }
    return {
        recording_id: String(record.recording_id ?? ""),
        fs: requireNumber(record.fs, "fs"),
        unit: String(record.unit ?? ""),
        pre_s: requireNumber(record.pre_s ?? 0, "pre_s"),
        post_s: requireNumber(record.post_s ?? 0, "post_s"),
        segments: record.segments.map(parseSegment),
    };
}

export function serializeAnnotations(exported: AnnotationExport): string {
    // Key order matches the Python writer (sorted) so files diff cleanly.
    const payload = {
        annotator: exported.annotator,
        b_points: exported.b_points,
        c_points: exported.c_points,
        created_at: exported.created_at,
        recording_id: exported.recording_id,
    };
    return JSON.stringify(payload, null, 2) + "\n";
}
