// Instances shipped with the UI so it works before any file is loaded.

export const T3 = `tree ((l1,l2),l3);
map 4 4
layout explicit 1 2 3
site l1 3 1
site l2 1 2
site l3 2 3
`;

export const COASTLINE_12 = `tree ((l11,(l1,l2)),((((l4,l6),l3),l12),(l7,(l8,((l10,l5),l9)))));
map 100 100
layout even
site l1 7.41 34.85
site l10 77.98 24.47
site l11 82.98 25.85
site l12 92.97 27.99
site l2 14.23 43.87
site l3 23.17 39.9
site l4 32.17 30.83
site l5 36.77 35.88
site l6 44.6 37.77
site l7 54.66 50
site l8 60.09 46.25
site l9 69.17 34.16
`;

export const BUNDLED: Record<string, string> = {
    't3 (3 leaves)': T3,
    'coastline (12 leaves)': COASTLINE_12,
};
