import assert from 'node:assert/strict';
import { test } from 'node:test';

import { linearScale, logScale, niceTicks, tickLabel } from '../src/scale';

test('niceTicks picks round steps covering the range', () => {
  assert.deepEqual(niceTicks(0, 10), [0, 2, 4, 6, 8, 10]);
  assert.deepEqual(niceTicks(0, 1), [0, 0.2, 0.4, 0.6, 0.8, 1]);
  const t = niceTicks(3, 97);
  assert.ok(t[0] >= 3 && t[t.length - 1] <= 97);
  assert.ok(t.length >= 3);
});

test('niceTicks labels stay on the step grid', () => {
  for (const v of niceTicks(0, 0.3)) {
    // No 0.30000000000000004-style artifacts.
    assert.equal(v, Number(v.toFixed(10)));
  }
});

test('linearScale maps endpoints to the pixel range', () => {
  const s = linearScale(0, 10, 100, 900);
  assert.equal(s.toPix(0), 100);
  assert.equal(s.toPix(10), 900);
  assert.equal(s.toPix(5), 500);
});

test('logScale spaces decades evenly', () => {
  const s = logScale(10, 1000, 0, 200, [10, 100, 1000]);
  assert.equal(s.toPix(10), 0);
  assert.ok(Math.abs(s.toPix(100) - 100) < 1e-9);
  assert.equal(s.toPix(1000), 200);
});

test('tickLabel matches precision to the step', () => {
  assert.equal(tickLabel(4, 2), '4');
  assert.equal(tickLabel(0.2, 0.2), '0.2');
  assert.equal(tickLabel(0.25, 0.05), '0.25');
  assert.equal(tickLabel(1000, 500), '1000');
});
