// Browser wiring: load a segments file, render the current beat on a canvas
// with a cursor readout, record one B-point per beat by click, and export
// the annotation file. Keyboard: n/ArrowRight next, p/ArrowLeft previous,
// u undo, c clear label, e export, shift+P next pass.

import { parseSegmentFile, serializeAnnotations } from "./format.js";
import { readoutAt, TraceGeometry } from "./plot.js";
import { AnnotationSession, SessionSnapshot } from "./session.js";
import { FormatError, SegmentFile } from "./types.js";

const MARGINS = { left: 56, right: 16, top: 16, bottom: 36 };

function byId<T extends HTMLElement>(id: string): T {
    const el = document.getElementById(id);
    if (el === null) throw new Error(`missing #${id}`);
    return el as T;
}

class App {
    private session: AnnotationSession | null = null;
    private canvas = byId<HTMLCanvasElement>("trace");
    private status = byId<HTMLDivElement>("status");
    private readout = byId<HTMLDivElement>("readout");
    private message = byId<HTMLDivElement>("message");
    private annotatorInput = byId<HTMLInputElement>("annotator");
    private fileInput = byId<HTMLInputElement>("segments-file");
    private exportButton = byId<HTMLButtonElement>("export");
    private cursorX: number | null = null;

    constructor() {
        this.fileInput.addEventListener("change", () => void this.loadSelectedFile());
        this.canvas.addEventListener("mousemove", (ev) => this.onMove(ev));
        this.canvas.addEventListener("mouseleave", () => {
            this.cursorX = null;
            this.render();
        });
        this.canvas.addEventListener("click", (ev) => this.onClick(ev));
        this.exportButton.addEventListener("click", () => this.exportAnnotations());
        this.annotatorInput.addEventListener("change", () => {
            if (this.session) {
                this.session.annotator = this.annotatorInput.value;
                this.persist();
            }
        });
        document.addEventListener("keydown", (ev) => this.onKey(ev));
        this.render();
    }

    private storageKey(file: SegmentFile): string {
        return `icgbpoint-annotator:${file.recording_id}`;
    }

    private async loadSelectedFile(): Promise<void> {
        const chosen = this.fileInput.files?.[0];
        if (!chosen) return;
        try {
            const file = parseSegmentFile(await chosen.text());
            const stored = localStorage.getItem(this.storageKey(file));
            if (stored !== null) {
                try {
                    const snapshot = JSON.parse(stored) as SessionSnapshot;
                    this.session = AnnotationSession.restore(file, snapshot);
                    this.note(
                        `resumed session: ${this.session.labeledCount}/` +
                        `${this.session.segmentCount} labeled, pass ${this.session.pass}`,
                    );
                } catch {
                    this.session = new AnnotationSession(file, this.annotatorInput.value);
                    this.note("stored session did not match; started fresh");
                }
            } else {
                this.session = new AnnotationSession(file, this.annotatorInput.value);
                this.note(`loaded ${file.segments.length} segments from ${file.recording_id}`);
            }
            this.annotatorInput.value = this.session.annotator;
        } catch (err) {
            this.session = null;
            this.note(`cannot load file: ${(err as Error).message}`, true);
        }
        this.render();
    }

    private persist(): void {
        if (!this.session) return;
        localStorage.setItem(
            this.storageKey(this.session.file),
            JSON.stringify(this.session.snapshot()),
        );
    }

    private note(text: string, isError = false): void {
        this.message.textContent = text;
        this.message.className = isError ? "error" : "";
    }

    private onKey(ev: KeyboardEvent): void {
        if (!this.session || ev.target === this.annotatorInput) return;
        if (ev.key === "n" || ev.key === "ArrowRight") this.session.next();
        else if (ev.key === "p" || ev.key === "ArrowLeft") this.session.previous();
        else if (ev.key === "u") {
            const segment = this.session.undo();
            if (segment !== null) this.session.goTo(segment);
        } else if (ev.key === "c") this.session.clearLabel(this.session.cursor);
        else if (ev.key === "e") this.exportAnnotations();
        else if (ev.key === "P" && ev.shiftKey) {
            if (window.confirm("Start a repeat labeling pass? This clears all labels.")) {
                this.session.startNextPass();
            }
        } else return;
        ev.preventDefault();
        this.persist();
        this.render();
    }

    private geometry(): TraceGeometry | null {
        const segment = this.session?.current;
        if (!segment) return null;
        return new TraceGeometry(
            this.canvas.width,
            this.canvas.height,
            MARGINS,
            segment.samples,
        );
    }

    private onMove(ev: MouseEvent): void {
        this.cursorX = ev.offsetX * (this.canvas.width / this.canvas.clientWidth);
        this.render();
    }

    private onClick(ev: MouseEvent): void {
        const session = this.session;
        const segment = session?.current;
        const geometry = this.geometry();
        if (!session || !segment || !geometry) return;
        const x = ev.offsetX * (this.canvas.width / this.canvas.clientWidth);
        const hit = readoutAt(segment, geometry, x, session.file.fs);
        if (hit === null) {
            this.note("click inside the trace to place the label", true);
            return;
        }
        session.recordLabel(session.cursor, hit.absolute);
        this.note(`beat ${session.cursor + 1}: labeled sample ${hit.absolute}`);
        this.persist();
        this.render();
    }

    private exportAnnotations(): void {
        const session = this.session;
        if (!session) return;
        let result;
        try {
            result = session.exportAnnotations(new Date().toISOString());
        } catch (err) {
            if (!(err instanceof FormatError)) throw err;
            if (!err.message.includes("unlabeled")) {
                this.note(err.message, true);
                return;
            }
            if (!window.confirm(`${err.message}. Export anyway?`)) return;
            try {
                result = session.exportAnnotations(new Date().toISOString(), true);
            } catch (inner) {
                this.note((inner as Error).message, true);
                return;
            }
        }
        const text = serializeAnnotations(result.annotations);
        const blob = new Blob([text], { type: "application/json" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = `${session.file.recording_id || "annotations"}_b_points.json`;
        link.click();
        URL.revokeObjectURL(link.href);
        const note =
            result.omitted > 0
                ? `exported ${result.annotations.b_points.length} labels ` +
                  `(${result.omitted} unlabeled beats omitted)`
                : `exported ${result.annotations.b_points.length} labels`;
        this.note(note);
    }

    private render(): void {
        const ctx = this.canvas.getContext("2d");
        if (!ctx) return;
        ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
        const session = this.session;
        const segment = session?.current;
        if (!session || !segment) {
            this.status.textContent = "no segments loaded";
            this.readout.textContent = "";
            return;
        }
        if (session.isComplete) {
            this.status.textContent =
                `all ${session.segmentCount} beats labeled (pass ${session.pass}) - ` +
                "press e to export";
        } else {
            this.status.textContent =
                `beat ${session.cursor + 1} / ${session.segmentCount} - ` +
                `${session.labeledCount} labeled - pass ${session.pass}`;
        }

        const geometry = this.geometry();
        if (!geometry) return;

        // waveform only: no detector marks, the annotator stays blinded
        ctx.strokeStyle = "#2e86ab";
        ctx.lineWidth = 1.5;
        ctx.beginPath();
        segment.samples.forEach((value, i) => {
            const x = geometry.sampleToX(i);
            const y = geometry.valueToY(value);
            if (i === 0) ctx.moveTo(x, y);
            else ctx.lineTo(x, y);
        });
        ctx.stroke();

        if (segment.clipped) {
            ctx.strokeStyle = "#cc3333";
            ctx.setLineDash([6, 4]);
            ctx.strokeRect(
                MARGINS.left - 4,
                MARGINS.top - 4,
                geometry.innerWidth + 8,
                geometry.innerHeight + 8,
            );
            ctx.setLineDash([]);
            ctx.fillStyle = "#cc3333";
            ctx.fillText("clipped at recording edge", MARGINS.left, 12);
        }

        const label = session.labelOf(session.cursor);
        if (label !== null) {
            const x = geometry.sampleToX(label - segment.start_index);
            const y = geometry.valueToY(segment.samples[label - segment.start_index]);
            ctx.strokeStyle = "#d1495b";
            ctx.beginPath();
            ctx.moveTo(x, MARGINS.top);
            ctx.lineTo(x, this.canvas.height - MARGINS.bottom);
            ctx.stroke();
            ctx.fillStyle = "#d1495b";
            ctx.beginPath();
            ctx.arc(x, y, 4, 0, 2 * Math.PI);
            ctx.fill();
        }

        if (this.cursorX !== null) {
            const hit = readoutAt(segment, geometry, this.cursorX, session.file.fs);
            if (hit !== null) {
                const x = geometry.sampleToX(hit.local);
                ctx.strokeStyle = "#99999955";
                ctx.beginPath();
                ctx.moveTo(x, MARGINS.top);
                ctx.lineTo(x, this.canvas.height - MARGINS.bottom);
                ctx.stroke();
                this.readout.textContent =
                    `sample ${hit.absolute} - ${hit.timeMs.toFixed(1)} ms - ` +
                    `${hit.value.toPrecision(5)} ${session.file.unit}`;
            } else {
                this.readout.textContent = "";
            }
        }
    }
}

new App();
