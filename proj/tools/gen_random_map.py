#!/usr/bin/env python3
"""Writes a seeded random grid map and a matching scenario in MovingAI format.

Starts and goals are drawn from the largest 4-connected component, so every
entry is solvable for a single agent; the last column is the BFS distance.
No two entries share a start or a goal.
"""
import argparse
import collections
import random


def components(grid, h, w):
    seen = [[-1] * w for _ in range(h)]
    sizes = []
    for r in range(h):
        for c in range(w):
            if grid[r][c] != "." or seen[r][c] >= 0:
                continue
            label, size = len(sizes), 0
            queue = collections.deque([(r, c)])
            seen[r][c] = label
            while queue:
                y, x = queue.popleft()
                size += 1
                for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < h and 0 <= nx < w and grid[ny][nx] == "." and seen[ny][nx] < 0:
                        seen[ny][nx] = label
                        queue.append((ny, nx))
            sizes.append(size)
    return seen, sizes


def distance(grid, h, w, start, goal):
    dist = {start: 0}
    queue = collections.deque([start])
    while queue:
        y, x = queue.popleft()
        if (y, x) == goal:
            return dist[goal]
        for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and grid[ny][nx] == "." and (ny, nx) not in dist:
                dist[(ny, nx)] = dist[(y, x)] + 1
                queue.append((ny, nx))
    return None


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--name", default="random-32-32-10")
    parser.add_argument("--height", type=int, default=32)
    parser.add_argument("--width", type=int, default=32)
    parser.add_argument("--obstacles", type=float, default=0.10)
    parser.add_argument("--entries", type=int, default=400)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--outdir", default=".")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    h, w = args.height, args.width
    cells = [(r, c) for r in range(h) for c in range(w)]
    blocked = set(rng.sample(cells, round(args.obstacles * h * w)))
    grid = [["@" if (r, c) in blocked else "." for c in range(w)] for r in range(h)]

    labels, sizes = components(grid, h, w)
    largest = max(range(len(sizes)), key=sizes.__getitem__)
    free = [(r, c) for (r, c) in cells if labels[r][c] == largest]

    map_file = f"{args.name}.map"
    with open(f"{args.outdir}/{map_file}", "w") as out:
        out.write(f"type octile\nheight {h}\nwidth {w}\nmap\n")
        for row in grid:
            out.write("".join(row) + "\n")

    with open(f"{args.outdir}/{args.name}.scen", "w") as out:
        out.write("version 1\n")
        starts = rng.sample(free, args.entries)
        goals = rng.sample(free, args.entries)
        while any(s == g for s, g in zip(starts, goals)):
            rng.shuffle(goals)
        for start, goal in zip(starts, goals):
            d = distance(grid, h, w, start, goal)
            out.write(f"{d // 10}\t{map_file}\t{w}\t{h}\t{start[1]}\t{start[0]}\t"
                      f"{goal[1]}\t{goal[0]}\t{float(d):.8f}\n")


if __name__ == "__main__":
    main()
