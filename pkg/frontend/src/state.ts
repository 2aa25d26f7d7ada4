// Editor state: the instance text, the accumulated constraints, and the
// what-if history. Constraint conflicts are caught client-side before any
// request is sent; the service stays the single source of truth for numbers.

import {
    ConstraintSet,
    OptimizeRequest,
    OptimizeResponse,
    ServiceClient,
} from './api.js';

export function emptyConstraints(): ConstraintSet {
    return { pins: {}, ranges: {}, fixed_rotations: {} };
}

/** Local validation mirroring the service's 400/422 cases. */
export function constraintConflicts(c: ConstraintSet, n: number): string[] {
    const problems: string[] = [];
    const taken = new Map<number, string>();
    for (const [leaf, pos] of Object.entries(c.pins)) {
        if (!Number.isInteger(pos) || pos < 1 || pos > n) {
            problems.push(`pin ${leaf}@${pos} outside positions 1..${n}`);
            continue;
        }
        const other = taken.get(pos);
        if (other !== undefined) {
            problems.push(`leaves ${other} and ${leaf} both pinned to position ${pos}`);
        }
        taken.set(pos, leaf);
    }
    for (const [leaf, [lo, hi]] of Object.entries(c.ranges)) {
        if (lo > hi || hi < 1 || lo > n) {
            problems.push(`empty range [${lo}, ${hi}] for ${leaf}`);
            continue;
        }
        const pin = c.pins[leaf];
        if (pin !== undefined && (pin < lo || pin > hi)) {
            problems.push(`pin ${leaf}@${pin} contradicts its range [${lo}, ${hi}]`);
        }
    }
    for (const [vertex, bit] of Object.entries(c.fixed_rotations)) {
        if (bit !== 0 && bit !== 1) {
            problems.push(`rotation for ${vertex} must be 0 or 1`);
        }
    }
    return problems;
}

export interface HistoryEntry {
    constraints: ConstraintSet;
    mode: string;
    measure: string;
    objective: number | null;
    crossings: number | null;
    optimal: boolean;
}

export interface SolveOutcome {
    response: OptimizeResponse;
    stale: boolean;
}

function cloneConstraints(c: ConstraintSet): ConstraintSet {
    return JSON.parse(JSON.stringify(c));
}

export class EditorState {
    instance = '';
    leafCount = 0;
    mode: 'internal' | 's' | 'po' = 's';
    measure = 'xhop';
    constraints: ConstraintSet = emptyConstraints();
    history: HistoryEntry[] = [];
    lastResponse: OptimizeResponse | null = null;

    // single in-flight optimize: later submissions win, earlier responses
    // are flagged stale and must not reach the screen
    private requestSeq = 0;

    constructor(private client: ServiceClient) {}

    loadInstance(text: string): void {
        this.instance = text;
        this.leafCount = countLeaves(text);
        this.constraints = emptyConstraints();
        this.history = [];
        this.lastResponse = null;
    }

    pinLeaf(leaf: string, position: number): string[] {
        const next = cloneConstraints(this.constraints);
        next.pins[leaf] = position;
        const problems = constraintConflicts(next, this.leafCount);
        if (problems.length === 0) this.constraints = next;
        return problems;
    }

    rangeLeaf(leaf: string, lo: number, hi: number): string[] {
        const next = cloneConstraints(this.constraints);
        next.ranges[leaf] = [lo, hi];
        const problems = constraintConflicts(next, this.leafCount);
        if (problems.length === 0) this.constraints = next;
        return problems;
    }

    toggleRotation(vertex: string): void {
        const current = this.constraints.fixed_rotations[vertex];
        if (current === undefined) {
            this.constraints.fixed_rotations[vertex] = 0;
        } else if (current === 0) {
            this.constraints.fixed_rotations[vertex] = 1;
        } else {
            delete this.constraints.fixed_rotations[vertex];
        }
    }

    clearConstraints(): void {
        this.constraints = emptyConstraints();
    }

    optimizeRequest(): OptimizeRequest {
        return {
            instance: this.instance,
            mode: this.mode,
            measure: this.measure,
            constraints: cloneConstraints(this.constraints),
        };
    }

    async reoptimize(): Promise<SolveOutcome> {
        const token = ++this.requestSeq;
        const request = this.optimizeRequest();
        const response = await this.client.optimize(request);
        if (token !== this.requestSeq) {
            return { response, stale: true };
        }
        this.lastResponse = response;
        this.history.push({
            constraints: request.constraints!,
            mode: request.mode,
            measure: this.measure,
            objective: response.objective,
            crossings: response.crossings,
            optimal: response.optimal,
        });
        return { response, stale: false };
    }
}

/** Leaf count straight off the instance text (one `site` line per leaf). */
export function countLeaves(instance: string): number {
    let count = 0;
    for (const line of instance.split('\n')) {
        if (line.trim().startsWith('site ')) count += 1;
    }
    return count;
}

/** Check a returned order against the submitted pins and ranges. */
export function orderSatisfies(order: string[], c: ConstraintSet): boolean {
    const position = new Map(order.map((leaf, i) => [leaf, i + 1]));
    for (const [leaf, pos] of Object.entries(c.pins)) {
        if (position.get(leaf) !== pos) return false;
    }
    for (const [leaf, [lo, hi]] of Object.entries(c.ranges)) {
        const p = position.get(leaf);
        if (p === undefined || p < lo || p > hi) return false;
    }
    return true;
}
