// Typed client for the geophylo service. All numbers the UI displays come
// from these responses; the client never computes crossings itself.

export interface ConstraintSet {
    pins: Record<string, number>;
    ranges: Record<string, [number, number]>;
    fixed_rotations: Record<string, number>;
}

export interface OptimizeRequest {
    instance: string;
    mode: 'internal' | 's' | 'po';
    solver?: string;
    measure?: string;
    constraints?: ConstraintSet;
    time_limit_ms?: number;
}

export interface OptimizeResponse {
    order: string[];
    objective: number | null;
    crossings: number | null;
    runtime_ms: number;
    optimal: boolean;
    k: number | null;
}

export interface ClassifyResponse {
    k: number;
    undecided_pairs: [string, string][];
}

export class ApiError extends Error {
    constructor(public status: number, detail: string) {
        super(detail);
    }
}

type FetchLike = typeof fetch;

export class ServiceClient {
    constructor(
        private baseUrl: string = '',
        private fetchFn: FetchLike = fetch,
    ) {}

    private async post(path: string, body: unknown): Promise<Response> {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(body),
        });
        if (!response.ok) {
            let detail = `${response.status}`;
            try {
                const parsed = await response.json();
                if (parsed && typeof parsed.detail === 'string') detail = parsed.detail;
            } catch {
                // non-JSON error body: keep the status text
            }
            throw new ApiError(response.status, detail);
        }
        return response;
    }

    async health(): Promise<boolean> {
        try {
            const response = await this.fetchFn(`${this.baseUrl}/health`);
            return response.ok;
        } catch {
            return false;
        }
    }

    async optimize(request: OptimizeRequest): Promise<OptimizeResponse> {
        const response = await this.post('/optimize', request);
        return await response.json();
    }

    async render(instance: string, order: string[] | null, mode: string): Promise<string> {
        const response = await this.post('/render', { instance, order, mode });
        return await response.text();
    }

    async classify(instance: string, leaderType: string): Promise<ClassifyResponse> {
        const response = await this.post('/classify', {
            instance, leader_type: leaderType,
        });
        return await response.json();
    }
}
