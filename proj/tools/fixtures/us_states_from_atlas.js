// Regenerates data/us_states.geojson from the us-atlas package (Census
// cartographic boundaries, 1:10m). Keeps the conterminous 48 states.
//
//   npm install us-atlas topojson-client
//   node us_states_from_atlas.js > ../../data/us_states.geojson

const topo = require("us-atlas/states-10m.json");
const { feature } = require("topojson-client");

const POSTAL = {
  "01": "AL", "04": "AZ", "05": "AR", "06": "CA", "08": "CO", "09": "CT",
  "10": "DE", "12": "FL", "13": "GA", "16": "ID", "17": "IL", "18": "IN",
  "19": "IA", "20": "KS", "21": "KY", "22": "LA", "23": "ME", "24": "MD",
  "25": "MA", "26": "MI", "27": "MN", "28": "MS", "29": "MO", "30": "MT",
  "31": "NE", "32": "NV", "33": "NH", "34": "NJ", "35": "NM", "36": "NY",
  "37": "NC", "38": "ND", "39": "OH", "40": "OK", "41": "OR", "42": "PA",
  "44": "RI", "45": "SC", "46": "SD", "47": "TN", "48": "TX", "49": "UT",
  "50": "VT", "51": "VA", "53": "WA", "54": "WV", "55": "WI", "56": "WY",
};

const round = (v) => Math.round(v * 1e6) / 1e6;

function cleanRing(ring) {
  const out = [];
  for (const [x, y] of ring) {
    const p = [round(x), round(y)];
    const last = out[out.length - 1];
    if (!last || last[0] !== p[0] || last[1] !== p[1]) out.push(p);
  }
  return out;
}

function ringArea(ring) {
  let a = 0;
  for (let i = 0; i + 1 < ring.length; ++i) {
    a += ring[i][0] * ring[i + 1][1] - ring[i + 1][0] * ring[i][1];
  }
  return a / 2;
}

const fc = feature(topo, topo.objects.states);
const features = [];
for (const f of fc.features) {
  const postal = POSTAL[f.id];
  if (!postal) continue;
  const polys = f.geometry.type === "Polygon" ? [f.geometry.coordinates] : f.geometry.coordinates;
  const kept = [];
  for (const poly of polys) {
    const valid = (r) => r.length >= 4 && Math.abs(ringArea(r)) > 0;
    const outer = cleanRing(poly[0]);
    if (!valid(outer)) continue;
    kept.push([outer, ...poly.slice(1).map(cleanRing).filter(valid)]);
  }
  features.push({
    type: "Feature",
    properties: { postal, fips: f.id, name: f.properties.name },
    geometry: kept.length === 1 ? { type: "Polygon", coordinates: kept[0] }
                                : { type: "MultiPolygon", coordinates: kept },
  });
}
features.sort((a, b) => a.properties.postal.localeCompare(b.properties.postal));
process.stdout.write(JSON.stringify({ type: "FeatureCollection", features }) + "\n");
