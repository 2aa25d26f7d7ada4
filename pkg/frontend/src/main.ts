// Browser entry point: wires the editor state to the DOM. The drawing is
// the service's SVG verbatim; clicks are resolved through the data-leaf /
// data-vertex attributes the renderer puts on its elements.

import { ApiError, ServiceClient } from './api.js';
import { BUNDLED } from './bundled.js';
import { EditorState, orderSatisfies } from './state.js';

const client = new ServiceClient('');
const state = new EditorState(client);

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

const drawing = el<HTMLDivElement>('drawing');
const banner = el<HTMLDivElement>('banner');
const badge = el<HTMLSpanElement>('badge');
const kBadge = el<HTMLSpanElement>('k-badge');
const constraintList = el<HTMLUListElement>('constraints');
const historyTable = el<HTMLTableSectionElement>('history-rows');
const modeSelect = el<HTMLSelectElement>('mode');
const measureSelect = el<HTMLSelectElement>('measure');
const instancePicker = el<HTMLSelectElement>('bundled');
const fileInput = el<HTMLInputElement>('instance-file');

function showError(message: string | null): void {
    banner.textContent = message ?? '';
    banner.style.display = message ? 'block' : 'none';
}

function renderConstraints(): void {
    constraintList.innerHTML = '';
    const c = state.constraints;
    const items: string[] = [];
    for (const [leaf, pos] of Object.entries(c.pins)) items.push(`${leaf} @ ${pos}`);
    for (const [leaf, [lo, hi]] of Object.entries(c.ranges)) items.push(`${leaf} in [${lo}, ${hi}]`);
    for (const [v, bit] of Object.entries(c.fixed_rotations)) items.push(`${v} rotation ${bit}`);
    for (const text of items) {
        const li = document.createElement('li');
        li.textContent = text;
        constraintList.appendChild(li);
    }
}

function renderHistory(): void {
    historyTable.innerHTML = '';
    state.history.forEach((entry, i) => {
        const row = document.createElement('tr');
        const parts = [
            `${i + 1}`,
            entry.mode === 'internal' ? `${entry.measure}=${entry.objective}` : `${entry.crossings} crossings`,
            `${Object.keys(entry.constraints.pins).length} pins, ` +
            `${Object.keys(entry.constraints.ranges).length} ranges, ` +
            `${Object.keys(entry.constraints.fixed_rotations).length} rotations`,
            entry.optimal ? 'optimal' : 'incumbent',
        ];
        for (const text of parts) {
            const cell = document.createElement('td');
            cell.textContent = text;
            row.appendChild(cell);
        }
        historyTable.appendChild(row);
    });
}

async function refreshDrawing(order: string[] | null): Promise<void> {
    const mode = state.mode === 'internal' ? 'internal' : state.mode;
    drawing.innerHTML = await client.render(state.instance, order, mode);
}

async function refreshClassify(): Promise<void> {
    const leaderType = state.mode === 'po' ? 'po' : 's';
    const { k } = await client.classify(state.instance, leaderType);
    kBadge.textContent = `k = ${k}`;
}

async function reoptimize(): Promise<void> {
    showError(null);
    badge.textContent = 'solving...';
    try {
        const { response, stale } = await state.reoptimize();
        if (stale) return; // a newer request is already on its way
        if (!orderSatisfies(response.order, state.constraints)) {
            showError('service returned an order violating the submitted constraints');
            return;
        }
        if (state.mode === 'internal') {
            badge.textContent = `${state.measure} = ${response.objective}`;
        } else {
            badge.textContent = `${response.crossings} crossings` +
                (response.optimal ? '' : ' (incumbent, not proven optimal)');
        }
        renderHistory();
        await refreshDrawing(response.order);
    } catch (err) {
        if (err instanceof ApiError && err.status === 422) {
            badge.textContent = 'infeasible';
            showError(`constraints infeasible: ${err.message}`);
        } else {
            badge.textContent = '';
            showError(err instanceof Error ? err.message : String(err));
        }
    }
}

async function loadInstance(text: string): Promise<void> {
    showError(null);
    try {
        state.loadInstance(text);
        renderConstraints();
        renderHistory();
        await refreshClassify();
        await refreshDrawing(null);
        await reoptimize();
    } catch (err) {
        showError(err instanceof Error ? err.message : String(err));
    }
}

drawing.addEventListener('click', (event) => {
    const target = event.target as Element | null;
    if (!target) return;
    const leaf = target.getAttribute('data-leaf');
    const vertex = target.getAttribute('data-vertex');
    if (leaf) {
        const raw = window.prompt(
            `pin ${leaf} to position (1..${state.leafCount}), ` +
            `or a range like 2-4; empty clears`);
        if (raw === null) return;
        const text = raw.trim();
        let problems: string[] = [];
        if (text === '') {
            delete state.constraints.pins[leaf];
            delete state.constraints.ranges[leaf];
        } else if (text.includes('-')) {
            const [lo, hi] = text.split('-').map(Number);
            problems = state.rangeLeaf(leaf, lo, hi);
        } else {
            problems = state.pinLeaf(leaf, Number(text));
        }
        if (problems.length) {
            showError(problems.join('; '));
            return;
        }
        renderConstraints();
        void reoptimize();
    } else if (vertex) {
        state.toggleRotation(vertex);
        renderConstraints();
        void reoptimize();
    }
});

modeSelect.addEventListener('change', () => {
    state.mode = modeSelect.value as 'internal' | 's' | 'po';
    measureSelect.disabled = state.mode !== 'internal';
    void refreshClassify();
    void reoptimize();
});

measureSelect.addEventListener('change', () => {
    state.measure = measureSelect.value;
    void reoptimize();
});

el<HTMLButtonElement>('clear').addEventListener('click', () => {
    state.clearConstraints();
    renderConstraints();
    void reoptimize();
});

el<HTMLButtonElement>('solve').addEventListener('click', () => void reoptimize());

instancePicker.addEventListener('change', () => {
    const text = BUNDLED[instancePicker.value];
    if (text) void loadInstance(text);
});

fileInput.addEventListener('change', async () => {
    const file = fileInput.files?.[0];
    if (file) void loadInstance(await file.text());
});

for (const name of Object.keys(BUNDLED)) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    instancePicker.appendChild(option);
}

void loadInstance(BUNDLED[instancePicker.value] ?? Object.values(BUNDLED)[0]);
