/**
 * DOM layer: slider panel, ranked product cards, explanation drill-down.
 *
 * All personalization math happens in the controller; this module only
 * renders its results and forwards input events.
 */

import { AssistantController, ExplanationView } from "./controller.js";
import { RankedEntry } from "./rating.js";
import { isExtreme, PRESETS } from "./state.js";
import type { PreferenceMeta, RatableProduct } from "./types.js";

const CATEGORY_LABELS: Record<string, string> = {
  environment: "Environment",
  health: "Health",
  quality: "Quality",
  social: "Social",
};

export class AssistantUi {
  private productList: HTMLElement;
  private sliderPanel: HTMLElement;
  private banner: HTMLElement;
  private explanationPanel: HTMLElement;
  private categorySelect: HTMLSelectElement;
  private openExplanation: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly controller: AssistantController,
  ) {
    this.root.innerHTML = "";
    this.banner = el("div", "banner hidden");
    const layout = el("div", "layout");
    this.sliderPanel = el("aside", "sliders");
    const main = el("main", "products");
    this.categorySelect = document.createElement("select");
    this.categorySelect.className = "category-select";
    this.productList = el("div", "product-list");
    this.explanationPanel = el("div", "explanation hidden");
    main.append(this.categorySelect, this.productList, this.explanationPanel);
    layout.append(this.sliderPanel, main);
    this.root.append(this.banner, layout);
  }

  renderPreferences(): void {
    this.sliderPanel.innerHTML = "";
    const heading = el("h2");
    heading.textContent = "Your sustainability preferences";
    const hint = el("p", "hint");
    hint.textContent =
      "Scores stay on this device. 5 is neutral; 0 opposes, 10 fully supports.";
    this.sliderPanel.append(heading, hint, this.presetRow());

    const byCategory = new Map<string, PreferenceMeta[]>();
    for (const preference of this.controller.preferences) {
      const list = byCategory.get(preference.category) ?? [];
      list.push(preference);
      byCategory.set(preference.category, list);
    }
    for (const [category, label] of Object.entries(CATEGORY_LABELS)) {
      const group = byCategory.get(category);
      if (!group) continue;
      const section = el("section", "category");
      const title = el("h3");
      title.textContent = label;
      section.append(title);
      for (const preference of group.sort((a, b) => (a.id < b.id ? -1 : 1))) {
        section.append(this.sliderRow(preference));
      }
      this.sliderPanel.append(section);
    }
  }

  private presetRow(): HTMLElement {
    const row = el("div", "preset-row");
    const reset = document.createElement("button");
    reset.textContent = "Reset to neutral";
    reset.addEventListener("click", () => {
      this.controller.state.resetToNeutral();
      this.renderPreferences();
      this.renderProducts(this.controller.ranking());
    });
    const select = document.createElement("select");
    const placeholder = document.createElement("option");
    placeholder.textContent = "Apply a template…";
    placeholder.value = "";
    select.append(placeholder);
    for (const name of Object.keys(PRESETS)) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.append(option);
    }
    select.addEventListener("change", () => {
      if (!select.value) return;
      this.controller.state.applyPreset(select.value);
      this.renderPreferences();
      this.renderProducts(this.controller.ranking());
    });
    row.append(reset, select);
    return row;
  }

  private sliderRow(preference: PreferenceMeta): HTMLElement {
    const row = el("div", "slider-row");
    const label = el("label");
    label.textContent = preference.statement;
    label.title = preference.description;

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "10";
    slider.step = "0.5";
    slider.value = String(this.controller.state.scoreOf(preference.id));

    const value = el("span", "value");
    const notice = el("div", "extreme-notice hidden");

    const sync = () => {
      const score = this.controller.state.scoreOf(preference.id);
      value.textContent = score.toFixed(1);
      if (isExtreme(score)) {
        notice.textContent =
          score === 10
            ? preference.strict
              ? "Fully supported: opposing products drop to 0."
              : "Fully supported: this preference weighs in at full strength."
            : "Fully opposed: supporting products are penalized.";
        notice.classList.remove("hidden");
      } else {
        notice.classList.add("hidden");
      }
    };

    slider.addEventListener("input", () => {
      const ranked = this.controller.setPreference(
        preference.id,
        Number(slider.value),
      );
      sync();
      this.renderProducts(ranked);
    });

    row.append(label, slider, value, notice);
    if (preference.strict) {
      const strictRow = el("div", "strict-row");
      const toggle = document.createElement("input");
      toggle.type = "checkbox";
      toggle.checked = this.controller.state.strictEnabled(preference.id);
      toggle.addEventListener("change", () => {
        const ranked = this.controller.setStrictEnabled(
          preference.id,
          toggle.checked,
        );
        this.renderProducts(ranked);
      });
      const strictLabel = el("span");
      strictLabel.textContent = "enforce strictly at 10";
      strictRow.append(toggle, strictLabel);
      row.append(strictRow);
    }
    sync();
    return row;
  }

  renderCategories(categories: string[], onSelect: (category: string) => void): void {
    this.categorySelect.innerHTML = "";
    for (const category of categories) {
      const option = document.createElement("option");
      option.value = category;
      option.textContent = category;
      this.categorySelect.append(option);
    }
    this.categorySelect.addEventListener("change", () =>
      onSelect(this.categorySelect.value),
    );
    if (categories.length > 0) onSelect(categories[0]);
  }

  renderProducts(ranked: RankedEntry<RatableProduct>[]): void {
    this.productList.innerHTML = "";
    for (const { item, rating } of ranked) {
      const card = el("div", "card");
      const name = el("div", "name");
      name.textContent = item.summary.name;
      const price = el("div", "price");
      price.textContent = item.summary.unit_price
        ? `${item.summary.unit_price}`
        : "";
      const score = el("div", "score");
      score.textContent = rating.scaled.toFixed(1);
      score.classList.add(
        rating.scaled > 5 ? "good" : rating.scaled < 5 ? "bad" : "neutral",
      );
      card.append(score, name, price);
      if (rating.strictViolation) {
        const strict = el("div", "strict-banner");
        strict.textContent = `Excluded: fully supported strict preference ${rating.strictViolation} is opposed`;
        card.append(strict);
      }
      card.addEventListener("click", () => void this.showExplanation(item.summary.id));
      this.productList.append(card);
    }
    if (this.openExplanation) void this.showExplanation(this.openExplanation);
  }

  private async showExplanation(productId: string): Promise<void> {
    this.openExplanation = productId;
    const view = await this.controller.explain(productId);
    this.renderExplanation(view);
  }

  renderExplanation(view: ExplanationView): void {
    this.explanationPanel.classList.remove("hidden");
    this.explanationPanel.innerHTML = "";
    const title = el("h3");
    title.textContent = `Why ${view.productId} is rated ${view.rating.scaled.toFixed(1)}`;
    this.explanationPanel.append(title);

    if (view.rating.strictViolation) {
      const cause = el("p", "strict-banner");
      cause.textContent = `Rated 0 because strict preference ${view.rating.strictViolation} is fully supported and this product opposes it.`;
      this.explanationPanel.append(cause);
      return;
    }
    if (view.neutral) {
      const none = el("p");
      none.textContent =
        "No preferences set: every product sits at the neutral 5.0.";
      this.explanationPanel.append(none);
      return;
    }

    const bars = el("div", "bars");
    const entries = Object.entries(view.preferenceContributions)
      .filter(([, v]) => v !== 0)
      .sort((a, b) => Math.abs(b[1]) - Math.abs(a[1]));
    for (const [preferenceId, value] of entries) {
      const row = el("div", "bar-row");
      const label = el("span", "bar-label");
      label.textContent = preferenceId;
      const bar = el("div", value > 0 ? "bar positive" : "bar negative");
      bar.style.width = `${Math.min(100, Math.abs(value) * 40)}%`;
      const amount = el("span", "bar-value");
      amount.textContent = value.toFixed(2);
      row.append(label, bar, amount);
      bars.append(row);
    }
    this.explanationPanel.append(bars);

    if (view.degraded) {
      const note = el("p", "hint");
      note.textContent = "Tag detail unavailable; showing preference level only.";
      this.explanationPanel.append(note);
      return;
    }
    const tags = el("div", "tag-columns");
    tags.append(
      signedList("Helping", view.positiveTags),
      signedList("Hurting", view.negativeTags),
    );
    this.explanationPanel.append(tags);
  }

  setOffline(offline: boolean): void {
    this.banner.classList.toggle("hidden", !offline);
    this.banner.textContent = offline
      ? "Offline: showing the last loaded data."
      : "";
  }
}

function signedList(
  title: string,
  entries: { id: string; value: number }[],
): HTMLElement {
  const box = el("div", "tag-list");
  const heading = el("h4");
  heading.textContent = title;
  box.append(heading);
  for (const entry of entries) {
    const row = el("div", "tag-row");
    row.textContent = `${entry.id}: ${entry.value.toFixed(3)}`;
    box.append(row);
  }
  if (entries.length === 0) {
    const none = el("div", "tag-row muted");
    none.textContent = "none";
    box.append(none);
  }
  return box;
}

function el(tag: string, className = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}
