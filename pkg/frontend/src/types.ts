// Data shapes shared between the segment loader, the session store and the
// annotation exporter. The segment payload is produced by
// `icgbpoint export-segments`; the exported annotations must load cleanly
// with `icgbpoint`'s load_annotations.

export interface SegmentRecord {
    c_index: number;
    start_index: number;
    samples: number[];
    clipped: boolean;
}

export interface SegmentFile {
    recording_id: string;
    fs: number;
    unit: string;
    pre_s: number;
    post_s: number;
    segments: SegmentRecord[];
}

export interface AnnotationExport {
    recording_id: string;
    annotator: string;
    created_at: string;
    b_points: number[];
    c_points: number[] | null;
}

// Fields that would leak detector output into the labeling view. The loader
// rejects payloads carrying any of these so the annotator stays blinded.
export const DETECTOR_FIELDS = ["b_index", "method", "transformed_peaks", "weights"];

export class FormatError extends Error {}
