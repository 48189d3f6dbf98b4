// Pure pixel/sample geometry for the waveform canvas, kept DOM-free so the
// snapping and scaling rules are unit-testable.

import { SegmentRecord } from "./types.js";

export interface Margins {
    left: number;
    right: number;
    top: number;
    bottom: number;
}

export class TraceGeometry {
    readonly width: number;
    readonly height: number;
    readonly margins: Margins;
    readonly count: number;
    readonly yMin: number;
    readonly yMax: number;

    constructor(width: number, height: number, margins: Margins, samples: number[]) {
        this.width = width;
        this.height = height;
        this.margins = margins;
        this.count = samples.length;
        let lo = Infinity;
        let hi = -Infinity;
        for (const v of samples) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        if (lo === hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        const pad = 0.05 * (hi - lo);
        this.yMin = lo - pad;
        this.yMax = hi + pad;
    }

    get innerWidth(): number {
        return this.width - this.margins.left - this.margins.right;
    }

    get innerHeight(): number {
        return this.height - this.margins.top - this.margins.bottom;
    }

    sampleToX(local: number): number {
        const step = this.count > 1 ? this.innerWidth / (this.count - 1) : 0;
        return this.margins.left + local * step;
    }

    valueToY(value: number): number {
        const frac = (value - this.yMin) / (this.yMax - this.yMin);
        return this.margins.top + (1 - frac) * this.innerHeight;
    }

    /** Snap a pixel x to the nearest sample; null outside the trace area. */
    xToNearestSample(x: number): number | null {
        if (this.count === 0) return null;
        if (x < this.margins.left || x > this.width - this.margins.right) return null;
        if (this.count === 1) return 0;
        const step = this.innerWidth / (this.count - 1);
        const local = Math.round((x - this.margins.left) / step);
        return Math.min(Math.max(local, 0), this.count - 1);
    }
}

export interface CursorReadout {
    local: number;
    absolute: number;
    value: number;
    timeMs: number;
}

export function readoutAt(
    segment: SegmentRecord,
    geometry: TraceGeometry,
    x: number,
    fs: number,
): CursorReadout | null {
    const local = geometry.xToNearestSample(x);
    if (local === null) return null;
    return {
        local,
        absolute: segment.start_index + local,
        value: segment.samples[local],
        timeMs: ((segment.start_index + local) / fs) * 1000,
    };
}
