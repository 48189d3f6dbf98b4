// Labeling session state: one B-point label per segment, undo, pass
// tracking, and snapshot/restore for resumable sessions.

import { AnnotationExport, FormatError, SegmentFile, SegmentRecord } from "./types.js";

interface UndoEntry {
    segment: number;
    previous: number | null;
}

export interface SessionSnapshot {
    recording_id: string;
    annotator: string;
    pass: number;
    cursor: number;
    labels: (number | null)[];
}

export interface ExportResult {
    annotations: AnnotationExport;
    omitted: number;
}

export class AnnotationSession {
    readonly file: SegmentFile;
    annotator: string;
    pass = 1;
    cursor = 0;
    private labels: (number | null)[];
    private undoStack: UndoEntry[] = [];

    constructor(file: SegmentFile, annotator = "") {
        this.file = file;
        this.annotator = annotator;
        this.labels = new Array(file.segments.length).fill(null);
    }

    get segmentCount(): number {
        return this.file.segments.length;
    }

    get current(): SegmentRecord | undefined {
        return this.file.segments[this.cursor];
    }

    labelOf(segment: number): number | null {
        return this.labels[segment] ?? null;
    }

    get labeledCount(): number {
        return this.labels.filter((v) => v !== null).length;
    }

    get isComplete(): boolean {
        return this.segmentCount > 0 && this.labeledCount === this.segmentCount;
    }

    next(): void {
        if (this.cursor < this.segmentCount - 1) this.cursor += 1;
    }

    previous(): void {
        if (this.cursor > 0) this.cursor -= 1;
    }

    goTo(segment: number): void {
        if (segment < 0 || segment >= this.segmentCount) {
            throw new RangeError(`segment ${segment} out of range`);
        }
        this.cursor = segment;
    }

    /** Store one absolute sample index for a segment; relabeling overwrites. */
    recordLabel(segment: number, absoluteIndex: number): void {
        const record = this.file.segments[segment];
        if (record === undefined) {
            throw new RangeError(`segment ${segment} out of range`);
        }
        if (!Number.isInteger(absoluteIndex)) {
            throw new RangeError(`label index must be an integer, got ${absoluteIndex}`);
        }
        const lo = record.start_index;
        const hi = record.start_index + record.samples.length;
        if (absoluteIndex < lo || absoluteIndex >= hi) {
            throw new RangeError(
                `label ${absoluteIndex} outside segment range [${lo}, ${hi})`,
            );
        }
        this.undoStack.push({ segment, previous: this.labels[segment] });
        this.labels[segment] = absoluteIndex;
    }

    clearLabel(segment: number): void {
        if (this.labels[segment] !== null) {
            this.undoStack.push({ segment, previous: this.labels[segment] });
            this.labels[segment] = null;
        }
    }

    /** Revert the most recent label change; returns the affected segment. */
    undo(): number | null {
        const entry = this.undoStack.pop();
        if (entry === undefined) return null;
        this.labels[entry.segment] = entry.previous;
        return entry.segment;
    }

    /** Start a repeat labeling pass: clears labels, keeps the queue. */
    startNextPass(): void {
        this.pass += 1;
        this.cursor = 0;
        this.labels = new Array(this.segmentCount).fill(null);
        this.undoStack = [];
    }

    /**
     * Build the annotation export. Refuses silently-partial output: callers
     * must opt in with allowPartial after confirming with the user, and the
     * omitted count is reported back.
     */
    exportAnnotations(createdAt: string, allowPartial = false): ExportResult {
        const unlabeled = this.segmentCount - this.labeledCount;
        if (unlabeled > 0 && !allowPartial) {
            throw new FormatError(
                `${unlabeled} of ${this.segmentCount} segments are unlabeled; ` +
                "confirm partial export to omit them",
            );
        }
        const bPoints: number[] = [];
        const cPoints: number[] = [];
        this.file.segments.forEach((record, i) => {
            const label = this.labels[i];
            if (label === null) return;
            bPoints.push(label);
            cPoints.push(record.c_index);
        });
        for (let i = 1; i < bPoints.length; i += 1) {
            if (bPoints[i] <= bPoints[i - 1]) {
                throw new FormatError(
                    `labels not ascending between beats ${i - 1} and ${i} ` +
                    `(${bPoints[i - 1]} then ${bPoints[i]}); fix them before export`,
                );
            }
        }
        return {
            annotations: {
                recording_id: this.file.recording_id,
                annotator: this.annotator,
                created_at: createdAt,
                b_points: bPoints,
                c_points: cPoints,
            },
            omitted: unlabeled,
        };
    }

    snapshot(): SessionSnapshot {
        return {
            recording_id: this.file.recording_id,
            annotator: this.annotator,
            pass: this.pass,
            cursor: this.cursor,
            labels: [...this.labels],
        };
    }

    static restore(file: SegmentFile, snapshot: SessionSnapshot): AnnotationSession {
        if (snapshot.recording_id !== file.recording_id) {
            throw new FormatError(
                `snapshot belongs to "${snapshot.recording_id}", ` +
                `segments are for "${file.recording_id}"`,
            );
        }
        if (snapshot.labels.length !== file.segments.length) {
            throw new FormatError(
                `snapshot has ${snapshot.labels.length} segments, file has ` +
                `${file.segments.length}`,
            );
        }
        const session = new AnnotationSession(file, snapshot.annotator);
        session.pass = snapshot.pass;
        session.cursor = Math.min(Math.max(snapshot.cursor, 0), file.segments.length - 1);
        snapshot.labels.forEach((label, i) => {
            if (label !== null) session.recordLabel(i, label);
        });
        return session;
    }
}
